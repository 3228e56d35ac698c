#include "treenash/lp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "treenash/error.h"
#include "treenash/random.h"

namespace treenash {
namespace {

constexpr double kAlphaClamp = 1e-9;

void check_parent_term(const RootedTree& rooted, PlayerId q,
                       const std::optional<Eigen::VectorXd>& parent_strategy) {
  if (rooted.parent[q].has_value() != parent_strategy.has_value()) {
    throw Error(ErrorKind::kInvalidGame,
                "player " + std::to_string(q) +
                    (parent_strategy ? " is the root but a parent strategy was given"
                                     : " has a parent but no parent strategy was given"));
  }
}

// A_{q,p} z, or zero at the root.
Eigen::VectorXd parent_payoff(const Game& game, const RootedTree& rooted, PlayerId q,
                              const std::optional<Eigen::VectorXd>& parent_strategy) {
  if (!parent_strategy) return Eigen::VectorXd::Zero(game.num_actions());
  return game.payoff(q, *rooted.parent[q]) * *parent_strategy;
}

}  // namespace

LpInstance build_lp(const Game& game, const RootedTree& rooted, PlayerId q,
                    const std::optional<Eigen::VectorXd>& parent_strategy,
                    const Eigen::VectorXd& y, const UniformStrategySet& uset,
                    const std::vector<CandidateList>& candidate_sets, double epsilon) {
  check_parent_term(rooted, q, parent_strategy);
  const auto& children = rooted.children[q];
  if (candidate_sets.size() != children.size()) {
    throw Error(ErrorKind::kInvalidGame, "one candidate list per child is required");
  }
  const int m = game.num_actions();
  const int d = static_cast<int>(children.size());

  LpInstance lp;
  lp.num_actions = m;
  lp.player = q;
  lp.children = children;
  lp.candidates = candidate_sets;
  for (const auto& list : candidate_sets) {
    if (list.empty()) {
      lp.trivially_infeasible = true;
      return lp;
    }
  }

  int offset = 0;
  for (const auto& list : candidate_sets) {
    lp.alpha_offset.push_back(offset);
    offset += static_cast<int>(list.size());
  }
  lp.sigma_offset = offset;
  lp.num_variables = offset + d * m;

  lp.equality = Eigen::MatrixXd::Zero(d * (1 + m), lp.num_variables);
  lp.equality_rhs = Eigen::VectorXd::Zero(d * (1 + m));
  for (int c = 0; c < d; ++c) {
    const int norm_row = c * (1 + m);
    lp.equality_rhs(norm_row) = 1.0;
    const auto& list = candidate_sets[c];
    for (std::size_t k = 0; k < list.size(); ++k) {
      const int var = lp.alpha_offset[c] + static_cast<int>(k);
      lp.equality(norm_row, var) = 1.0;
      for (int a = 0; a < m; ++a) lp.equality(norm_row + 1 + a, var) = -uset.at(list[k])(a);
    }
    for (int a = 0; a < m; ++a) lp.equality(norm_row + 1 + a, lp.sigma_index(c, a)) = 1.0;
  }

  // Row j: Σ_c (e_j − y)^T A_{q,c} σ_c <= (y − e_j)^T h + ε/2.
  const Eigen::VectorXd h = parent_payoff(game, rooted, q, parent_strategy);
  lp.best_response = Eigen::MatrixXd::Zero(m, lp.num_variables);
  lp.best_response_rhs.resize(m);
  const double y_h = y.dot(h);
  for (int c = 0; c < d; ++c) {
    const auto& a = game.payoff(q, children[c]);
    const Eigen::RowVectorXd y_a = y.transpose() * a;
    for (int j = 0; j < m; ++j) {
      lp.best_response.row(j).segment(lp.sigma_index(c, 0), m) = a.row(j) - y_a;
    }
  }
  for (int j = 0; j < m; ++j) lp.best_response_rhs(j) = y_h - h(j) + epsilon / 2.0;
  return lp;
}

std::optional<FractionalExtension> solve_feasibility(const LpInstance& lp, double tolerance,
                                                     LpDiagnostics* diagnostics) {
  if (lp.trivially_infeasible) {
    if (diagnostics) *diagnostics = {PhaseOneStatus::kInfeasible, 0, 0.0};
    return std::nullopt;
  }
  const PhaseOneResult result = find_feasible_point(lp.equality, lp.equality_rhs,
                                                    lp.best_response, lp.best_response_rhs,
                                                    tolerance);
  if (diagnostics) *diagnostics = {result.status, result.pivots, result.max_residual};
  if (result.status != PhaseOneStatus::kFeasible) return std::nullopt;

  FractionalExtension frac;
  frac.children = lp.children;
  frac.candidates = lp.candidates;
  const int m = lp.num_actions;
  for (std::size_t c = 0; c < lp.children.size(); ++c) {
    Eigen::VectorXd alpha =
        result.x.segment(lp.alpha_offset[c], static_cast<Eigen::Index>(lp.candidates[c].size()));
    alpha = alpha.unaryExpr([](double v) { return v < 0.0 && v >= -kAlphaClamp ? 0.0 : v; });
    alpha /= alpha.sum();
    frac.alpha.push_back(std::move(alpha));
    frac.sigma.push_back(result.x.segment(lp.sigma_index(static_cast<int>(c), 0), m));
  }
  return frac;
}

double fractional_residual(const Game& game, const RootedTree& rooted, PlayerId q,
                           const std::optional<Eigen::VectorXd>& parent_strategy,
                           const Eigen::VectorXd& y, const UniformStrategySet& uset,
                           const FractionalExtension& frac, double epsilon) {
  const int m = game.num_actions();
  double worst = 0.0;
  Eigen::VectorXd payoffs = parent_payoff(game, rooted, q, parent_strategy);
  for (std::size_t c = 0; c < frac.children.size(); ++c) {
    const auto& alpha = frac.alpha[c];
    worst = std::max(worst, -alpha.minCoeff());
    worst = std::max(worst, std::abs(alpha.sum() - 1.0));
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < frac.candidates[c].size(); ++k) {
      mean += alpha(static_cast<Eigen::Index>(k)) * uset.at(frac.candidates[c][k]);
    }
    worst = std::max(worst, (mean - frac.sigma[c]).cwiseAbs().maxCoeff());
    payoffs += game.payoff(q, frac.children[c]) * frac.sigma[c];
  }
  // y must be an ε/2-best response against the σ's and z.
  worst = std::max(worst, payoffs.maxCoeff() - epsilon / 2.0 - y.dot(payoffs));
  return worst;
}

NeighborStrategies<double> neighborhood(const RootedTree& rooted, PlayerId q,
                                        const std::optional<Eigen::VectorXd>& parent_strategy,
                                        const UniformStrategySet& uset, const Extension& ext) {
  NeighborStrategies<double> out;
  if (parent_strategy) out.emplace(*rooted.parent[q], *parent_strategy);
  for (std::size_t c = 0; c < ext.children.size(); ++c) {
    out.emplace(ext.children[c], uset.at(ext.strategies[c]));
  }
  return out;
}

RoundingOutcome round_extension(const Game& game, const RootedTree& rooted, PlayerId q,
                                const std::optional<Eigen::VectorXd>& parent_strategy,
                                const Eigen::VectorXd& y, const UniformStrategySet& uset,
                                const FractionalExtension& frac, double epsilon,
                                std::uint64_t seed, int max_tries) {
  check_parent_term(rooted, q, parent_strategy);
  Rng rng(seed);
  const std::size_t d = frac.children.size();

  // Inverse-CDF tables per child.
  std::vector<std::vector<double>> cdf(d);
  for (std::size_t c = 0; c < d; ++c) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < frac.alpha[c].size(); ++k) {
      acc += frac.alpha[c](k);
      cdf[c].push_back(acc);
    }
  }

  RoundingOutcome outcome;
  Extension draw{frac.children, std::vector<StrategyIndex>(d)};
  while (outcome.tries < max_tries) {
    ++outcome.tries;
    for (std::size_t c = 0; c < d; ++c) {
      const double u = uniform01(rng) * cdf[c].back();
      auto it = std::upper_bound(cdf[c].begin(), cdf[c].end(), u);
      std::size_t k = static_cast<std::size_t>(it - cdf[c].begin());
      k = std::min(k, cdf[c].size() - 1);
      draw.strategies[c] = frac.candidates[c][k];
    }
    const auto neighbors = neighborhood(rooted, q, parent_strategy, uset, draw);
    if (is_epsilon_best_response(game, q, y, neighbors, epsilon)) {
      outcome.extension = draw;
      return outcome;
    }
  }
  return outcome;
}

double concentration_deviation(const Game& game, PlayerId q, const UniformStrategySet& uset,
                               const Extension& sampled, const FractionalExtension& frac) {
  Eigen::VectorXd gap = Eigen::VectorXd::Zero(game.num_actions());
  for (std::size_t c = 0; c < frac.children.size(); ++c) {
    const auto& a = game.payoff(q, frac.children[c]);
    gap += a * (uset.at(sampled.strategies[c]) - frac.sigma[c]);
  }
  return gap.cwiseAbs().maxCoeff();
}

bool check_concentration_event(const Game& game, PlayerId q, const UniformStrategySet& uset,
                               const Extension& sampled, const FractionalExtension& frac,
                               double epsilon) {
  return concentration_deviation(game, q, uset, sampled, frac) <= epsilon / 4.0;
}

}  // namespace treenash
