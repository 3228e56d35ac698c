#include "treenash/io.h"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace treenash::io {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where,
                    std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) throw InputError(where + ": missing field \"" + k + "\"");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw InputError(where + ": unknown field \"" + item.key() + "\"");
    }
  }
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

Eigen::VectorXd get_vector(const json& j, const std::string& where,
                           std::optional<int> expected_size = std::nullopt) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  if (expected_size && static_cast<int>(j.size()) != *expected_size) {
    throw InputError(where + ": expected " + std::to_string(*expected_size) + " entries, got " +
                     std::to_string(j.size()));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = get_number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix<double> get_matrix(const json& j, const std::string& where, int m) {
  if (!j.is_array() || static_cast<int>(j.size()) != m) {
    throw InputError(where + ": expected " + std::to_string(m) + " rows");
  }
  Matrix<double> a(m, m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = get_vector(j[i], where + "[" + std::to_string(i) + "]", m).transpose();
  }
  return a;
}

json matrix_to_json(const Matrix<double>& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

nlohmann::json game_to_json(const Game& game, double epsilon_normalization) {
  json edges = json::array();
  for (const auto& e : game.edges()) {
    edges.push_back({{"u", e.u},
                     {"v", e.v},
                     {"payoff_u_v", matrix_to_json(e.payoff_u_v)},
                     {"payoff_v_u", matrix_to_json(e.payoff_v_u)}});
  }
  return {{"num_players", game.num_players()},
          {"num_actions", game.num_actions()},
          {"epsilon_normalization", epsilon_normalization},
          {"edges", std::move(edges)}};
}

GameFile game_from_json(const nlohmann::json& j) {
  require_object(j, "game", {"num_players", "num_actions", "epsilon_normalization", "edges"});
  const int n = get_int(j["num_players"], "num_players");
  const int m = get_int(j["num_actions"], "num_actions");
  if (n < 1) throw InputError("num_players: must be >= 1");
  if (m < 1) throw InputError("num_actions: must be >= 1");
  const double eps = get_number(j["epsilon_normalization"], "epsilon_normalization");
  const auto& edges = j["edges"];
  if (!edges.is_array()) throw InputError("edges: expected an array");
  std::vector<EdgePayoffs<double>> payoffs;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    const auto& e = edges[k];
    require_object(e, where, {"u", "v", "payoff_u_v", "payoff_v_u"});
    payoffs.push_back({get_int(e["u"], where + ".u"), get_int(e["v"], where + ".v"),
                       get_matrix(e["payoff_u_v"], where + ".payoff_u_v", m),
                       get_matrix(e["payoff_v_u"], where + ".payoff_v_u", m)});
  }
  try {
    return {Game(n, m, std::move(payoffs)), eps};
  } catch (const Error& err) {
    throw InputError(std::string("game: ") + err.what());
  }
}

nlohmann::json profile_to_json(const Profile<double>& profile) {
  json strategies = json::array();
  for (const auto& x : profile) {
    json row = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) row.push_back(x(i));
    strategies.push_back(std::move(row));
  }
  return strategies;
}

nlohmann::json certificate_to_json(const EquilibriumCertificate& cert) {
  json regrets = json::array();
  for (Eigen::Index i = 0; i < cert.regrets.size(); ++i) regrets.push_back(cert.regrets(i));
  return {{"epsilon", cert.epsilon},
          {"strategies", profile_to_json(cert.profile)},
          {"regrets", std::move(regrets)},
          {"support_size", cert.support_size},
          {"seed", cert.seed}};
}

ProfileFile profile_from_json(const nlohmann::json& j) {
  require_object(j, "profile", {"strategies"}, {"epsilon", "regrets", "support_size", "seed"});
  ProfileFile out;
  if (j.contains("epsilon")) out.epsilon = get_number(j["epsilon"], "epsilon");
  if (j.contains("support_size")) out.support_size = get_int(j["support_size"], "support_size");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw InputError("seed: expected an integer");
    }
    out.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("regrets")) {
    const Eigen::VectorXd r = get_vector(j["regrets"], "regrets");
    out.regrets = std::vector<double>(r.data(), r.data() + r.size());
  }
  const auto& s = j["strategies"];
  if (!s.is_array()) throw InputError("strategies: expected an array");
  for (std::size_t p = 0; p < s.size(); ++p) {
    out.strategies.push_back(get_vector(s[p], "strategies[" + std::to_string(p) + "]"));
  }
  return out;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

GameFile load_game(const std::string& path) { return game_from_json(read_json(path)); }

void save_game(const std::string& path, const Game& game, double epsilon_normalization) {
  write_text(path, dump(game_to_json(game, epsilon_normalization)));
}

}  // namespace treenash::io
