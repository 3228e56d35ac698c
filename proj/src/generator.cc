#include "treenash/generator.h"

#include <algorithm>
#include <queue>
#include <string>

#include "treenash/error.h"
#include "treenash/random.h"

namespace treenash {

std::vector<PlayerId> random_prufer_sequence(int num_players, std::uint64_t seed) {
  std::vector<PlayerId> seq;
  if (num_players < 3) return seq;
  Rng rng(seed);
  for (int i = 0; i < num_players - 2; ++i) {
    seq.push_back(static_cast<PlayerId>(uniform_index(rng, static_cast<std::uint64_t>(num_players))));
  }
  return seq;
}

std::vector<Edge> decode_prufer(const std::vector<PlayerId>& sequence, int num_players) {
  if (num_players < 1) throw Error(ErrorKind::kInvalidGame, "need at least one vertex");
  if (num_players == 1) return {};
  if (static_cast<int>(sequence.size()) != num_players - 2) {
    throw Error(ErrorKind::kInvalidGame, "Prüfer sequence must have n-2 entries");
  }
  std::vector<int> degree(num_players, 1);
  for (PlayerId v : sequence) {
    if (v < 0 || v >= num_players) throw Error(ErrorKind::kInvalidPlayerId, "id out of range");
    ++degree[v];
  }
  std::priority_queue<PlayerId, std::vector<PlayerId>, std::greater<>> leaves;
  for (PlayerId v = 0; v < num_players; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  std::vector<Edge> edges;
  for (PlayerId v : sequence) {
    const PlayerId leaf = leaves.top();
    leaves.pop();
    edges.push_back({leaf, v});
    if (--degree[v] == 1) leaves.push(v);
  }
  const PlayerId a = leaves.top();
  leaves.pop();
  const PlayerId b = leaves.top();
  edges.push_back({a, b});
  return edges;
}

std::vector<Edge> random_tree(int num_players, std::uint64_t seed) {
  return decode_prufer(random_prufer_sequence(num_players, seed), num_players);
}

std::vector<Edge> path_tree(int num_players) {
  std::vector<Edge> edges;
  for (PlayerId p = 0; p + 1 < num_players; ++p) edges.push_back({p, p + 1});
  return edges;
}

std::vector<Edge> star_tree(int num_players) {
  std::vector<Edge> edges;
  for (PlayerId p = 1; p < num_players; ++p) edges.push_back({0, p});
  return edges;
}

Game random_normalized_game(int num_players, int num_actions, double epsilon,
                            const std::optional<std::vector<Edge>>& topology, std::uint64_t seed) {
  if (num_players < 1 || num_actions < 1) {
    throw Error(ErrorKind::kInvalidGame, "need n, m >= 1");
  }
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw Error(ErrorKind::kInvalidEpsilon, "epsilon must lie in (0, 1]");
  }
  const std::vector<Edge> edges =
      topology ? *topology : random_tree(num_players, seed);
  root_tree(num_players, edges);

  std::vector<int> degree(num_players, 0);
  for (const auto& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<double> bound(num_players);
  for (PlayerId p = 0; p < num_players; ++p) {
    bound[p] = normalization_entry_bound(degree[p], num_actions, epsilon);
  }

  Rng rng(seed);
  auto draw = [&](PlayerId owner) {
    Matrix<double> a(num_actions, num_actions);
    for (int i = 0; i < num_actions; ++i) {
      for (int j = 0; j < num_actions; ++j) a(i, j) = uniform01(rng) * bound[owner];
    }
    return a;
  };
  std::vector<EdgePayoffs<double>> payoffs;
  for (const auto& e : edges) {
    EdgePayoffs<double> ep{e.u, e.v, {}, {}};
    ep.payoff_u_v = draw(e.u);
    ep.payoff_v_u = draw(e.v);
    payoffs.push_back(std::move(ep));
  }

  // Largest pure utility per player: max over own action of the summed row maxima.
  const int m = num_actions;
  std::vector<Eigen::VectorXd> row_max_sum(num_players, Eigen::VectorXd::Zero(m));
  for (const auto& ep : payoffs) {
    row_max_sum[ep.u] += ep.payoff_u_v.rowwise().maxCoeff();
    row_max_sum[ep.v] += ep.payoff_v_u.rowwise().maxCoeff();
  }
  for (auto& ep : payoffs) {
    const double top_u = row_max_sum[ep.u].maxCoeff();
    const double top_v = row_max_sum[ep.v].maxCoeff();
    if (top_u > 1.0) ep.payoff_u_v /= top_u;
    if (top_v > 1.0) ep.payoff_v_u /= top_v;
  }
  return Game(num_players, num_actions, std::move(payoffs));
}

}  // namespace treenash
