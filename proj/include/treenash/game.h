#ifndef TREENASH_GAME_H_
#define TREENASH_GAME_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "treenash/error.h"
#include "treenash/tree.h"

namespace treenash {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// A mixed strategy is a probability vector over the m actions; a profile holds
// one per player.
template <typename Scalar>
using Profile = std::vector<Vector<Scalar>>;

// Strategies of the neighbours of one player, keyed by neighbour id.
template <typename Scalar>
using NeighborStrategies = std::map<PlayerId, Vector<Scalar>>;

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kBestResponseTolerance = 1e-9;
inline constexpr double kVerifyTolerance = 1e-9;
inline constexpr double kRegretNoise = 1e-12;

template <typename Scalar>
struct EdgePayoffs {
  PlayerId u = 0;
  PlayerId v = 0;
  Matrix<Scalar> payoff_u_v;  // payoffs to u, rows indexed by u's action
  Matrix<Scalar> payoff_v_u;  // payoffs to v, rows indexed by v's action
};

template <typename Scalar>
class TreePolymatrixGame {
 public:
  TreePolymatrixGame(int num_players, int num_actions,
                     std::vector<EdgePayoffs<Scalar>> edges)
      : num_players_(num_players),
        num_actions_(num_actions),
        edges_(std::move(edges)),
        incidence_(num_players > 0 ? num_players : 0) {
    if (num_players < 1) {
      throw Error(ErrorKind::kInvalidGame, "num_players must be >= 1");
    }
    if (num_actions < 1) {
      throw Error(ErrorKind::kInvalidGame, "num_actions must be >= 1");
    }
    std::vector<Edge> plain;
    plain.reserve(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      check_matrix(edge.payoff_u_v, e, "payoff_u_v");
      check_matrix(edge.payoff_v_u, e, "payoff_v_u");
      plain.push_back({edge.u, edge.v});
    }
    // Rejects bad ids, self-loops, duplicates and non-trees.
    root_tree(num_players, plain);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      incidence_[edges_[e].u].push_back({edges_[e].v, static_cast<int>(e), true});
      incidence_[edges_[e].v].push_back({edges_[e].u, static_cast<int>(e), false});
    }
    for (auto& list : incidence_) {
      std::sort(list.begin(), list.end(),
                [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
    }
    neighbors_.resize(num_players);
    for (int p = 0; p < num_players; ++p) {
      for (const auto& inc : incidence_[p]) neighbors_[p].push_back(inc.neighbor);
    }
  }

  int num_players() const { return num_players_; }
  int num_actions() const { return num_actions_; }
  const std::vector<EdgePayoffs<Scalar>>& edges() const { return edges_; }
  std::vector<Edge> edge_list() const {
    std::vector<Edge> out;
    for (const auto& e : edges_) out.push_back({e.u, e.v});
    return out;
  }

  // Neighbours of p in ascending id order.
  const std::vector<PlayerId>& neighbors(PlayerId p) const {
    check_player(p);
    return neighbors_[p];
  }
  int degree(PlayerId p) const { return static_cast<int>(neighbors(p).size()); }

  // A_{p,q}: payoffs to p on edge (p,q).
  const Matrix<Scalar>& payoff(PlayerId p, PlayerId q) const {
    check_player(p);
    for (const auto& inc : incidence_[p]) {
      if (inc.neighbor == q) {
        const auto& e = edges_[inc.edge];
        return inc.forward ? e.payoff_u_v : e.payoff_v_u;
      }
    }
    throw Error(ErrorKind::kInvalidPlayerId,
                "players " + std::to_string(p) + " and " + std::to_string(q) + " are not adjacent");
  }

  void check_player(PlayerId p) const {
    if (p < 0 || p >= num_players_) {
      throw Error(ErrorKind::kInvalidPlayerId, "player " + std::to_string(p) + " out of range");
    }
  }

 private:
  struct Incidence {
    PlayerId neighbor;
    int edge;
    bool forward;  // true if this player is the edge's u
  };

  void check_matrix(const Matrix<Scalar>& a, std::size_t e, const char* name) const {
    if (a.rows() != num_actions_ || a.cols() != num_actions_) {
      throw Error(ErrorKind::kInvalidGame, "edge " + std::to_string(e) + " " + name +
                                               " must be " + std::to_string(num_actions_) + "x" +
                                               std::to_string(num_actions_));
    }
    if (!a.allFinite() || (a.array() < Scalar(0)).any()) {
      throw Error(ErrorKind::kInvalidGame,
                  "edge " + std::to_string(e) + " " + name + " has a negative or non-finite entry");
    }
  }

  int num_players_;
  int num_actions_;
  std::vector<EdgePayoffs<Scalar>> edges_;
  std::vector<std::vector<Incidence>> incidence_;
  std::vector<std::vector<PlayerId>> neighbors_;
};

using Game = TreePolymatrixGame<double>;

template <typename Scalar>
RootedTree validate_and_root(const TreePolymatrixGame<Scalar>& game,
                             std::optional<PlayerId> root = std::nullopt) {
  const auto edges = game.edge_list();
  return root_tree(game.num_players(), edges, root);
}

// Throws kInvalidStrategy unless v has length m, nonnegative entries and sums
// to one within kSimplexTolerance.
template <typename Derived>
void validate_strategy(const Eigen::MatrixBase<Derived>& v, int num_actions) {
  if (v.size() != num_actions) {
    throw Error(ErrorKind::kInvalidStrategy, "strategy has " + std::to_string(v.size()) +
                                                 " entries, expected " +
                                                 std::to_string(num_actions));
  }
  if (!v.allFinite() || (v.array() < 0).any()) {
    throw Error(ErrorKind::kInvalidStrategy, "strategy has a negative or non-finite entry");
  }
  if (std::abs(static_cast<double>(v.sum()) - 1.0) > kSimplexTolerance) {
    throw Error(ErrorKind::kInvalidStrategy, "strategy does not sum to 1");
  }
}

template <typename Scalar>
void validate_profile(const TreePolymatrixGame<Scalar>& game, const Profile<Scalar>& profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw Error(ErrorKind::kInvalidStrategy, "profile has " + std::to_string(profile.size()) +
                                                 " strategies, expected " +
                                                 std::to_string(game.num_players()));
  }
  for (const auto& x : profile) validate_strategy(x, game.num_actions());
}

// Σ_q x_p^T A_{p,q} x_q over the neighbours q of p.
template <typename Scalar>
Scalar expected_utility(const TreePolymatrixGame<Scalar>& game, PlayerId p,
                        const Profile<Scalar>& profile) {
  Scalar total(0);
  for (PlayerId q : game.neighbors(p)) {
    total += profile[p].dot(game.payoff(p, q) * profile[q]);
  }
  return total;
}

// Payoff of every pure action of p against fixed neighbour strategies:
// entry j is Σ_q e_j^T A_{p,q} x_q.
template <typename Scalar>
Vector<Scalar> deviation_payoffs(const TreePolymatrixGame<Scalar>& game, PlayerId p,
                                 const NeighborStrategies<Scalar>& neighbor_strategies) {
  Vector<Scalar> payoffs = Vector<Scalar>::Zero(game.num_actions());
  for (PlayerId q : game.neighbors(p)) {
    auto it = neighbor_strategies.find(q);
    if (it == neighbor_strategies.end()) {
      throw Error(ErrorKind::kMissingNeighborStrategy,
                  "no strategy for neighbour " + std::to_string(q) + " of player " +
                      std::to_string(p));
    }
    payoffs.noalias() += game.payoff(p, q) * it->second;
  }
  return payoffs;
}

template <typename Scalar>
Scalar deviation_payoff(const TreePolymatrixGame<Scalar>& game, PlayerId p, int action,
                        const NeighborStrategies<Scalar>& neighbor_strategies) {
  if (action < 0 || action >= game.num_actions()) {
    throw Error(ErrorKind::kInvalidGame, "action " + std::to_string(action) + " out of range");
  }
  return deviation_payoffs(game, p, neighbor_strategies)(action);
}

template <typename Scalar>
NeighborStrategies<Scalar> neighbor_strategies_of(const TreePolymatrixGame<Scalar>& game,
                                                  PlayerId p, const Profile<Scalar>& profile) {
  NeighborStrategies<Scalar> out;
  for (PlayerId q : game.neighbors(p)) out.emplace(q, profile[q]);
  return out;
}

// max_j deviation payoff minus the current expected utility of p.
template <typename Scalar>
Scalar regret(const TreePolymatrixGame<Scalar>& game, PlayerId p, const Profile<Scalar>& profile) {
  const Vector<Scalar> payoffs = deviation_payoffs(game, p, neighbor_strategies_of(game, p, profile));
  const Scalar gap = payoffs.maxCoeff() - profile[p].dot(payoffs);
  if (gap < Scalar(0) && gap >= Scalar(-kRegretNoise)) return Scalar(0);
  return gap;
}

template <typename Scalar>
Vector<Scalar> regrets(const TreePolymatrixGame<Scalar>& game, const Profile<Scalar>& profile) {
  Vector<Scalar> out(game.num_players());
  for (PlayerId p = 0; p < game.num_players(); ++p) out(p) = regret(game, p, profile);
  return out;
}

template <typename Scalar, typename Derived>
bool is_epsilon_best_response(const TreePolymatrixGame<Scalar>& game, PlayerId p,
                              const Eigen::MatrixBase<Derived>& y,
                              const NeighborStrategies<Scalar>& neighbor_strategies,
                              Scalar epsilon) {
  const Vector<Scalar> payoffs = deviation_payoffs(game, p, neighbor_strategies);
  return y.dot(payoffs) >= payoffs.maxCoeff() - epsilon - Scalar(kBestResponseTolerance);
}

// Entry bound of a normalized game for a player of the given degree:
// max{1/d, ε / (2 sqrt(6 d log m))}. The log defaults to natural log.
inline double normalization_entry_bound(int degree, int num_actions, double epsilon,
                                        double log_base = std::numbers::e) {
  if (degree <= 0) return 1.0;
  const double d = degree;
  const double log_m = std::log(static_cast<double>(num_actions)) / std::log(log_base);
  const double eps_branch =
      log_m > 0 ? epsilon / (2.0 * std::sqrt(6.0 * d * log_m)) : 0.0;
  return std::max(1.0 / d, eps_branch);
}

struct NormalizationViolation {
  enum class Kind { kEntryOutOfRange, kUtilityAboveOne, kUtilityBelowZero };
  Kind kind;
  PlayerId player;
  std::optional<PlayerId> neighbor;  // set for entry violations
  int row = -1;
  int col = -1;
  double value = 0.0;
  double bound = 0.0;
};

struct NormalizationReport {
  std::vector<NormalizationViolation> violations;
  bool ok() const { return violations.empty(); }
};

inline constexpr double kNormalizationSlack = 1e-12;

// Checks the entry-wise bound and that every pure utility lies in [0, 1]. The
// utility check uses per-edge row extrema, which is exact because utilities
// are separable across edges.
template <typename Scalar>
NormalizationReport check_normalized(const TreePolymatrixGame<Scalar>& game, double epsilon,
                                     double log_base = std::numbers::e) {
  NormalizationReport report;
  const int m = game.num_actions();
  for (PlayerId p = 0; p < game.num_players(); ++p) {
    const int d = game.degree(p);
    const double bound = normalization_entry_bound(d, m, epsilon, log_base);
    Vector<double> row_max_sum = Vector<double>::Zero(m);
    Vector<double> row_min_sum = Vector<double>::Zero(m);
    for (PlayerId q : game.neighbors(p)) {
      const auto& a = game.payoff(p, q);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          const double value = static_cast<double>(a(i, j));
          if (value < 0.0 || value > bound + kNormalizationSlack) {
            report.violations.push_back({NormalizationViolation::Kind::kEntryOutOfRange, p, q, i,
                                         j, value, bound});
          }
        }
        row_max_sum(i) += static_cast<double>(a.row(i).maxCoeff());
        row_min_sum(i) += static_cast<double>(a.row(i).minCoeff());
      }
    }
    if (d > 0) {
      Eigen::Index arg = 0;
      const double hi = row_max_sum.maxCoeff(&arg);
      if (hi > 1.0 + kNormalizationSlack) {
        report.violations.push_back({NormalizationViolation::Kind::kUtilityAboveOne, p,
                                     std::nullopt, static_cast<int>(arg), -1, hi, 1.0});
      }
      const double lo = row_min_sum.minCoeff(&arg);
      if (lo < 0.0) {
        report.violations.push_back({NormalizationViolation::Kind::kUtilityBelowZero, p,
                                     std::nullopt, static_cast<int>(arg), -1, lo, 0.0});
      }
    }
  }
  return report;
}

std::string describe(const NormalizationViolation& violation);

}  // namespace treenash

#endif  // TREENASH_GAME_H_
