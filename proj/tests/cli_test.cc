#include "treenash/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_util.h"
#include "treenash/io.h"

namespace treenash {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("treenash_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_game(const std::string& name, const Game& g, double eps = 0.5) const {
    io::save_game(path(name), g, eps);
    return path(name);
  }

  std::string write_json(const std::string& name, const json& j) const {
    io::write_text(path(name), io::dump(j));
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateSingleEdge) {
  ASSERT_EQ(cli::run({"generate", "--players", "2", "--actions", "2", "--epsilon", "0.5", "--seed",
                      "7", "--out", path("g.json")}),
            cli::kOk);
  const auto file = io::load_game(path("g.json"));
  EXPECT_EQ(file.game.num_players(), 2);
  ASSERT_EQ(file.game.edges().size(), 1u);
  EXPECT_EQ(file.game.payoff(0, 1).rows(), 2);
  EXPECT_EQ(file.game.payoff(0, 1).cols(), 2);
  EXPECT_EQ(file.epsilon_normalization, 0.5);
}

TEST_F(CliTest, GenerateStar) {
  ASSERT_EQ(cli::run({"generate", "--players", "5", "--actions", "2", "--epsilon", "0.5",
                      "--topology", "star", "--out", path("g.json")}),
            cli::kOk);
  const auto file = io::load_game(path("g.json"));
  ASSERT_EQ(file.game.edges().size(), 4u);
  for (const auto& e : file.game.edge_list()) EXPECT_TRUE(e.u == 0 || e.v == 0);
}

TEST_F(CliTest, GenerateRandomMatchesGenerator) {
  ASSERT_EQ(cli::run({"generate", "--players", "6", "--actions", "2", "--epsilon", "0.5",
                      "--topology", "random", "--seed", "11", "--out", path("g.json")}),
            cli::kOk);
  const auto file = io::load_game(path("g.json"));
  const auto expected = random_tree(6, 11);
  const auto got = file.game.edge_list();
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].u, expected[i].u);
    EXPECT_EQ(got[i].v, expected[i].v);
  }
}

TEST_F(CliTest, GenerateRejectsBadFlags) {
  EXPECT_EQ(cli::run({"generate", "--players", "0", "--actions", "2", "--epsilon", "0.5", "--out",
                      path("g.json")}),
            cli::kInputError);
  EXPECT_EQ(cli::run({"generate", "--players", "3", "--actions", "2", "--epsilon", "0.5",
                      "--topology", "ring", "--out", path("g.json")}),
            cli::kInputError);
  EXPECT_EQ(cli::run({"generate", "--players", "3", "--actions", "2", "--epsilon", "0.5", "--out",
                      path("missing_dir/g.json")}),
            cli::kIoError);
}

TEST_F(CliTest, SolveExamples) {
  const auto zero = write_game("zero.json", testing::zero_game(3, 2, path_tree(3)));
  ASSERT_EQ(cli::run({"solve", "--game", zero, "--epsilon", "0.3", "--out", path("z.json")}), cli::kOk);
  const auto zc = io::profile_from_json(io::read_json(path("z.json")));
  ASSERT_TRUE(zc.regrets.has_value());
  for (double r : *zc.regrets) EXPECT_EQ(r, 0.0);

  const auto coord = write_game("coord.json", testing::coordination_game());
  ASSERT_EQ(cli::run({"solve", "--game", coord, "--epsilon", "0.5", "--support-size", "1", "--out",
                      path("c.json")}),
            cli::kOk);
  const auto cc = io::profile_from_json(io::read_json(path("c.json")));
  EXPECT_EQ(cc.strategies[0], cc.strategies[1]);
  EXPECT_EQ(cc.support_size, 1);

  const auto pennies = write_game("mp.json", testing::matching_pennies());
  EXPECT_EQ(cli::run({"solve", "--game", pennies, "--epsilon", "0.4", "--support-size", "1", "--out",
                      path("mp_out.json")}),
            cli::kNoEquilibrium);
  EXPECT_FALSE(fs::exists(path("mp_out.json")));
}

TEST_F(CliTest, SolveCapExceeded) {
  std::vector<Edge> edges;
  for (int c = 1; c <= 8; ++c) edges.push_back({0, c});
  const auto g = write_game("star.json", testing::zero_game(9, 2, edges));
  EXPECT_EQ(cli::run({"solve", "--game", g, "--epsilon", "0.5", "--support-size", "3",
                      "--lp-threshold", "inf", "--exhaustive-cap", "3", "--out", path("o.json")}),
            cli::kCapExceeded);
}

TEST_F(CliTest, VerifyExamples) {
  const auto coord = write_game("coord.json", testing::coordination_game());
  const auto bad = write_json("bad.json", {{"strategies", {{1.0, 0.0}, {0.0, 1.0}}}});
  EXPECT_EQ(cli::run({"verify", "--game", coord, "--profile", bad, "--epsilon", "0.5"}), cli::kRejected);

  const auto good = write_json("good.json", {{"strategies", {{1.0, 0.0}, {1.0, 0.0}}}});
  EXPECT_EQ(cli::run({"verify", "--game", coord, "--profile", good, "--epsilon", "0.5"}), cli::kOk);

  const auto short_sum = write_json("sum.json", {{"strategies", {{0.9, 0.0}, {1.0, 0.0}}}});
  EXPECT_EQ(cli::run({"verify", "--game", coord, "--profile", short_sum, "--epsilon", "0.5"}),
            cli::kInputError);

  const auto wrong_n = write_json("n.json", {{"strategies", {{1.0, 0.0}}}});
  EXPECT_EQ(cli::run({"verify", "--game", coord, "--profile", wrong_n, "--epsilon", "0.5"}),
            cli::kInputError);
  const auto wrong_m = write_json("m.json", {{"strategies", {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}}});
  EXPECT_EQ(cli::run({"verify", "--game", coord, "--profile", wrong_m, "--epsilon", "0.5"}),
            cli::kInputError);
  EXPECT_EQ(cli::run({"verify", "--game", coord, "--profile", path("nope.json"), "--epsilon", "0.5"}),
            cli::kIoError);
}

TEST_F(CliTest, OracleExamples) {
  const auto zero = write_game("zero.json", testing::zero_game(2, 2, {{0, 1}}));
  const auto coord = write_game("coord.json", testing::coordination_game());
  const auto pennies = write_game("mp.json", testing::matching_pennies());
  EXPECT_EQ(cli::run({"oracle", "--game", zero, "--epsilon", "0.1", "--support-size", "1"}), cli::kOk);
  EXPECT_EQ(cli::run({"oracle", "--game", coord, "--epsilon", "0.1", "--support-size", "1", "--all"}),
            cli::kOk);
  EXPECT_EQ(cli::run({"oracle", "--game", pennies, "--epsilon", "0.4", "--support-size", "1"}),
            cli::kRejected);
  EXPECT_EQ(cli::run({"oracle", "--game", pennies, "--epsilon", "0.4", "--support-size", "1", "--all"}),
            cli::kRejected);
  EXPECT_EQ(cli::run({"oracle", "--game", coord, "--epsilon", "0.1", "--support-size", "3", "--cap",
                      "10"}),
            cli::kCapExceeded);
}

TEST_F(CliTest, BenchGrid) {
  ASSERT_EQ(cli::run({"bench", "--players", "2,4,8", "--actions", "2", "--epsilons", "0.5",
                      "--support-sizes", "2", "--repeats", "3", "--seed", "5", "--out", path("a.csv")}),
            cli::kOk);
  std::istringstream in(slurp(path("a.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, cli::kBenchHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 11u);
    if (cols[5] == "1") EXPECT_LE(std::stod(cols[10]), 0.5 + 1e-9);
  }
  EXPECT_EQ(rows, 9);
}

TEST_F(CliTest, BenchEmptyGridIsHeaderOnly) {
  ASSERT_EQ(cli::run({"bench", "--out", path("e.csv")}), cli::kOk);
  EXPECT_EQ(slurp(path("e.csv")), std::string(cli::kBenchHeader) + "\n");
}

TEST_F(CliTest, BenchDeterministicColumns) {
  cli::BenchGrid grid;
  grid.players = {3, 6};
  grid.actions = {2};
  grid.epsilons = {0.5};
  grid.support_sizes = {2};
  grid.repeats = 2;
  grid.seed = 9;
  grid.lp_threshold = 2;
  const auto a = cli::run_bench(grid);
  const auto b = cli::run_bench(grid);
  ASSERT_EQ(a.size(), 4u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].success, b[i].success);
    EXPECT_EQ(a[i].lp_calls, b[i].lp_calls);
    EXPECT_EQ(a[i].resamples, b[i].resamples);
    if (a[i].success) EXPECT_EQ(a[i].max_regret, b[i].max_regret);
  }
}

TEST_F(CliTest, MalformedGameFiles) {
  json g = io::game_to_json(testing::coordination_game(), 0.5);
  g["colour"] = "blue";
  const auto unknown = write_json("unknown.json", g);
  EXPECT_EQ(cli::run({"solve", "--game", unknown, "--epsilon", "0.5", "--out", path("o.json")}),
            cli::kInputError);

  json h = io::game_to_json(testing::coordination_game(), 0.5);
  h["edges"][0]["payoff_u_v"][1] = {1.0};
  const auto ragged = write_json("ragged.json", h);
  EXPECT_EQ(cli::run({"solve", "--game", ragged, "--epsilon", "0.5", "--out", path("o.json")}),
            cli::kInputError);

  io::write_text(path("broken.json"), "{\"num_players\": 2,\n  \"edges\": [\n");
  EXPECT_EQ(cli::run({"solve", "--game", path("broken.json"), "--epsilon", "0.5", "--out",
                      path("o.json")}),
            cli::kInputError);

  json p = {{"strategies", {{1.0, 0.0}, {1.0, 0.0}}}, {"extra", 1}};
  EXPECT_THROW(io::profile_from_json(p), io::InputError);
}

TEST_F(CliTest, GameJsonRoundTripIsExact) {
  const Game g = random_normalized_game(5, 3, 0.3, std::nullopt, 17);
  const auto back = io::game_from_json(json::parse(io::dump(io::game_to_json(g, 0.3))));
  ASSERT_EQ(back.game.edges().size(), g.edges().size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    EXPECT_EQ(back.game.edges()[e].payoff_u_v, g.edges()[e].payoff_u_v);
    EXPECT_EQ(back.game.edges()[e].payoff_v_u, g.edges()[e].payoff_v_u);
  }
  EXPECT_EQ(back.epsilon_normalization, 0.3);
}

// generate → solve → verify: whenever solve succeeds, verify accepts.
TEST_F(CliTest, RoundTrip) {
  for (int seed = 0; seed < 8; ++seed) {
    const std::string s = std::to_string(seed);
    const std::string n = std::to_string(2 + seed);
    ASSERT_EQ(cli::run({"generate", "--players", n, "--actions", "2", "--epsilon", "0.5", "--seed", s,
                        "--out", path("g.json")}),
              cli::kOk);
    const int code = cli::run({"solve", "--game", path("g.json"), "--epsilon", "0.5", "--support-size",
                               "2", "--lp-threshold", "2", "--seed", s, "--out", path("c.json")});
    ASSERT_TRUE(code == cli::kOk || code == cli::kNoEquilibrium) << code;
    if (code != cli::kOk) continue;
    EXPECT_EQ(cli::run({"verify", "--game", path("g.json"), "--profile", path("c.json"), "--epsilon",
                        "0.5"}),
              cli::kOk);
  }
}

TEST_F(CliTest, SeedFromEnvironment) {
  const auto g = write_game("g.json", random_normalized_game(6, 2, 0.5, star_tree(6), 1));
  const std::vector<std::string> args{"solve", "--game", g, "--epsilon", "0.5", "--support-size",
                                      "2", "--lp-threshold", "2"};
  auto with_out = [&](std::vector<std::string> a, const std::string& out) {
    a.push_back("--out");
    a.push_back(path(out));
    return a;
  };
  ::setenv("TREENASH_SEED", "42", 1);
  ASSERT_EQ(cli::run(with_out(args, "env.json")), cli::kOk);
  ::unsetenv("TREENASH_SEED");
  auto explicit_args = with_out(args, "flag.json");
  explicit_args.push_back("--seed");
  explicit_args.push_back("42");
  ASSERT_EQ(cli::run(explicit_args), cli::kOk);
  EXPECT_EQ(slurp(path("env.json")), slurp(path("flag.json")));
}

}  // namespace
}  // namespace treenash
