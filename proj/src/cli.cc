#include "treenash/cli.h"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "treenash/dp_solver.h"
#include "treenash/error.h"
#include "treenash/generator.h"
#include "treenash/io.h"
#include "treenash/oracle.h"

namespace treenash::cli {
namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted = true; }

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TREENASH_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed TREENASH_SEED=" << env << "\n";
    }
  }
  return 0;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNoEquilibriumFound: return kNoEquilibrium;
    case ErrorKind::kCapExceeded:
    case ErrorKind::kSetTooLarge:
    case ErrorKind::kOverflow: return kCapExceeded;
    case ErrorKind::kInternalSoundnessViolation:
    case ErrorKind::kMissingExtension: return 6;
    default: return kInputError;
  }
}

std::optional<int> parse_threshold(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "inf" || text == "infinity") return kNoLpThreshold;
  std::size_t used = 0;
  const int value = std::stoi(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad --lp-threshold " + text);
  return value;
}

struct GenerateArgs {
  int players = 2;
  int actions = 2;
  double epsilon = 0.5;
  std::optional<std::uint64_t> seed;
  std::string topology = "random";
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  const std::uint64_t seed = a.seed.value_or(default_seed());
  std::vector<Edge> edges;
  if (a.topology == "path") {
    edges = path_tree(a.players);
  } else if (a.topology == "star") {
    edges = star_tree(a.players);
  } else {
    edges = random_tree(a.players, seed);
  }
  const Game game = random_normalized_game(a.players, a.actions, a.epsilon, edges, seed);
  io::save_game(a.out, game, a.epsilon);
  const auto report = check_normalized(game, a.epsilon);
  std::cerr << "normalization: " << (report.ok() ? "ok" : "violated") << " ("
            << report.violations.size() << " violations)\n";
  for (const auto& v : report.violations) std::cerr << "  " << describe(v) << "\n";
  return kOk;
}

struct SolveArgs {
  std::string game;
  double epsilon = 0.5;
  std::optional<int> support_size;
  std::string lp_threshold;
  int max_tries = kDefaultMaxTries;
  double lp_tolerance = kDefaultLpTolerance;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::optional<int> root;
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };
  const io::GameFile file = io::load_game(a.game);
  SolverConfig config;
  config.epsilon = a.epsilon;
  config.support_override = a.support_size;
  config.lp_threshold = parse_threshold(a.lp_threshold);
  config.max_tries = a.max_tries;
  config.lp_tolerance = a.lp_tolerance;
  config.rng_seed = a.seed.value_or(default_seed());
  config.thread_count = a.threads;
  config.root = a.root;
  config.exhaustive_cap = a.exhaustive_cap;
  try {
    const SolveResult result = solve(file.game, config);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    io::write_text(a.out, io::dump(io::certificate_to_json(result.certificate)));
    std::cout << "max_regret=" << result.certificate.max_regret() << "\n"
              << "wall_ms=" << elapsed_ms() << "\n";
    return kOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    std::cout << "max_regret=none\n"
              << "wall_ms=" << elapsed_ms() << "\n";
    return exit_code_for(e.kind());
  }
}

struct VerifyArgs {
  std::string game;
  std::string profile;
  double epsilon = 0.5;
};

int cmd_verify(const VerifyArgs& a) {
  const io::GameFile file = io::load_game(a.game);
  const io::ProfileFile profile = io::profile_from_json(io::read_json(a.profile));
  const Game& game = file.game;
  if (static_cast<int>(profile.strategies.size()) != game.num_players()) {
    throw io::InputError("strategies: expected " + std::to_string(game.num_players()) +
                         " players, got " + std::to_string(profile.strategies.size()));
  }
  for (std::size_t p = 0; p < profile.strategies.size(); ++p) {
    if (profile.strategies[p].size() != game.num_actions()) {
      throw io::InputError("strategies[" + std::to_string(p) + "]: expected " +
                           std::to_string(game.num_actions()) + " actions");
    }
  }
  const Verification v = verify_profile(game, profile.strategies, a.epsilon);
  nlohmann::json regrets = nlohmann::json::array();
  for (Eigen::Index p = 0; p < v.regrets.size(); ++p) regrets.push_back(v.regrets(p));
  std::cout << nlohmann::json{{"regrets", regrets},
                              {"max_regret", v.max_regret},
                              {"accepted", v.accepted}}
                   .dump()
            << "\n";
  return v.accepted ? kOk : kRejected;
}

struct OracleArgs {
  std::string game;
  double epsilon = 0.5;
  int support_size = 1;
  bool all = false;
  std::uint64_t cap = kDefaultOracleCap;
};

nlohmann::json indexed_profile(const UniformStrategySet& uset,
                               const std::vector<StrategyIndex>& indices) {
  return {{"indices", indices},
          {"strategies", io::profile_to_json(profile_from_indices(uset, indices))}};
}

int cmd_oracle(const OracleArgs& a) {
  const io::GameFile file = io::load_game(a.game);
  const UniformStrategySet uset(file.game.num_actions(), a.support_size);
  try {
    if (a.all) {
      const auto found = all_equilibria(file.game, a.epsilon, uset, a.cap);
      nlohmann::json list = nlohmann::json::array();
      for (const auto& idx : found) list.push_back(indexed_profile(uset, idx));
      std::cout << nlohmann::json{{"equilibria", list}}.dump() << "\n";
      return found.empty() ? kRejected : kOk;
    }
    const auto found = exhaustive_search(file.game, a.epsilon, uset, a.cap);
    std::cout << (found ? indexed_profile(uset, *found) : nlohmann::json(nullptr)).dump() << "\n";
    return found ? kOk : kRejected;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

struct BenchArgs {
  BenchGrid grid;
  std::string lp_threshold;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_bench(BenchArgs a) {
  a.grid.seed = a.seed.value_or(default_seed());
  a.grid.lp_threshold = parse_threshold(a.lp_threshold);
  std::ofstream out(a.out, std::ios::trunc);
  if (!out) throw io::IoError("cannot open " + a.out + " for writing");
  out << kBenchHeader << "\n" << std::flush;
  g_interrupted = false;
  auto previous = std::signal(SIGINT, on_interrupt);
  run_bench(a.grid, &out);
  std::signal(SIGINT, previous);
  return kOk;
}

}  // namespace

std::string format_bench_row(const BenchRow& r) {
  std::ostringstream s;
  s.precision(17);
  s << r.n << ',' << r.m << ',' << r.epsilon << ',' << r.b << ',' << r.seed << ','
    << (r.success ? 1 : 0) << ',';
  s.precision(6);
  s << std::fixed << r.wall_ms << std::defaultfloat;
  s.precision(17);
  s << ',' << r.lp_calls << ',' << r.resamples << ',' << r.fallbacks << ',';
  if (r.success) {
    s << r.max_regret;
  } else {
    s << "nan";
  }
  return s.str();
}

std::vector<BenchRow> run_bench(const BenchGrid& grid, std::ostream* out) {
  std::vector<BenchRow> rows;
  for (int n : grid.players) {
    for (int m : grid.actions) {
      for (double eps : grid.epsilons) {
        for (int b : grid.support_sizes) {
          for (int r = 0; r < grid.repeats; ++r) {
            if (g_interrupted) return rows;
            BenchRow row{n, m, eps, b, grid.seed + static_cast<std::uint64_t>(r)};
            const Game game =
                random_normalized_game(n, m, eps, random_tree(n, row.seed), row.seed);
            SolverConfig config;
            config.epsilon = eps;
            config.support_override = b;
            config.lp_threshold = grid.lp_threshold;
            config.rng_seed = row.seed;
            config.thread_count = grid.threads;
            const auto start = std::chrono::steady_clock::now();
            try {
              const SolveResult result = solve(game, config);
              row.success = true;
              row.max_regret = result.certificate.max_regret();
              row.lp_calls = result.stats.lp_calls;
              row.resamples = result.stats.resamples();
              row.fallbacks = result.stats.fallbacks;
            } catch (const Error& e) {
              if (e.kind() == ErrorKind::kInternalSoundnessViolation) throw;
            }
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
            if (out) *out << format_bench_row(row) << "\n" << std::flush;
            rows.push_back(row);
          }
        }
      }
    }
  }
  return rows;
}

int run(int argc, char** argv) {
  CLI::App app{"ε-Nash equilibria of tree polymatrix games"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random normalized game");
  generate->add_option("--players", gen.players)->required()->check(CLI::PositiveNumber);
  generate->add_option("--actions", gen.actions)->required()->check(CLI::PositiveNumber);
  generate->add_option("--epsilon", gen.epsilon)->required();
  generate->add_option("--seed", gen.seed);
  generate->add_option("--topology", gen.topology)
      ->check(CLI::IsMember({"path", "star", "random"}));
  generate->add_option("--out", gen.out)->required();

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "Compute an ε-Nash equilibrium");
  solve_cmd->add_option("--game", sol.game)->required();
  solve_cmd->add_option("--epsilon", sol.epsilon)->required();
  solve_cmd->add_option("--support-size", sol.support_size);
  solve_cmd->add_option("--lp-threshold", sol.lp_threshold, "child count, or 'inf'");
  solve_cmd->add_option("--max-tries", sol.max_tries);
  solve_cmd->add_option("--lp-tolerance", sol.lp_tolerance);
  solve_cmd->add_option("--seed", sol.seed);
  solve_cmd->add_option("--threads", sol.threads);
  solve_cmd->add_option("--root", sol.root);
  solve_cmd->add_option("--exhaustive-cap", sol.exhaustive_cap);
  solve_cmd->add_option("--out", sol.out)->required();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check a profile's regrets");
  verify->add_option("--game", ver.game)->required();
  verify->add_option("--profile", ver.profile)->required();
  verify->add_option("--epsilon", ver.epsilon)->required();

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Brute-force search over U^n");
  oracle->add_option("--game", orc.game)->required();
  oracle->add_option("--epsilon", orc.epsilon)->required();
  oracle->add_option("--support-size", orc.support_size)->required()->check(CLI::PositiveNumber);
  oracle->add_flag("--all", orc.all);
  oracle->add_option("--cap", orc.cap);

  BenchArgs ben;
  auto* bench = app.add_subcommand("bench", "Time the solver over a parameter grid");
  bench->add_option("--players", ben.grid.players)->delimiter(',');
  bench->add_option("--actions", ben.grid.actions)->delimiter(',');
  bench->add_option("--epsilons", ben.grid.epsilons)->delimiter(',');
  bench->add_option("--support-sizes", ben.grid.support_sizes)->delimiter(',');
  bench->add_option("--repeats", ben.grid.repeats)->check(CLI::PositiveNumber);
  bench->add_option("--seed", ben.seed);
  bench->add_option("--lp-threshold", ben.lp_threshold);
  bench->add_option("--threads", ben.grid.threads);
  bench->add_option("--out", ben.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*solve_cmd) return cmd_solve(sol);
    if (*verify) return cmd_verify(ver);
    if (*oracle) return cmd_oracle(orc);
    if (*bench) return cmd_bench(ben);
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const io::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage{"treenash"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace treenash::cli
