#include "treenash/uniform.h"

#include <cmath>
#include <limits>
#include <string>

#include "treenash/error.h"

namespace treenash {

int support_size(int num_actions, int num_players, double epsilon, SupportSizing sizing) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw Error(ErrorKind::kInvalidEpsilon, "epsilon must lie in (0, 1], got " +
                                                std::to_string(epsilon));
  }
  if (num_actions < 1 || num_players < 1) {
    throw Error(ErrorKind::kInvalidGame, "support_size needs m, n >= 1");
  }
  const double eps = sizing == SupportSizing::kHalfEpsilon ? epsilon / 2.0 : epsilon;
  const double numerator = 8.0 * (std::log(static_cast<double>(num_actions)) +
                                  std::log(static_cast<double>(num_players)) - std::log(eps) +
                                  std::log(8.0));
  const double b = std::ceil(numerator / (eps * eps));
  if (b > static_cast<double>(std::numeric_limits<int>::max())) {
    throw Error(ErrorKind::kOverflow, "support size does not fit in an int");
  }
  return std::max(1, static_cast<int>(b));
}

std::uint64_t count_uniform(int num_actions, int support) {
  if (num_actions < 1 || support < 0) {
    throw Error(ErrorKind::kInvalidGame, "count_uniform needs m >= 1, b >= 0");
  }
  // C(b + k, k) with k = m − 1, built up as C(b+i, i) for i = 1..k; every
  // intermediate quotient is an exact binomial coefficient.
  unsigned __int128 result = 1;
  const auto k = static_cast<unsigned>(num_actions - 1);
  for (unsigned i = 1; i <= k; ++i) {
    result = result * (static_cast<unsigned __int128>(support) + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorKind::kOverflow, "C(" + std::to_string(num_actions + support - 1) + ", " +
                                            std::to_string(num_actions - 1) +
                                            ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

UniformStrategySet::UniformStrategySet(int num_actions, int support, std::uint64_t cap)
    : num_actions_(num_actions), support_(support) {
  if (num_actions < 1 || support < 1) {
    throw Error(ErrorKind::kInvalidGame, "enumerate_uniform needs m, b >= 1");
  }
  const std::uint64_t total = count_uniform(num_actions, support);
  if (total > cap) {
    throw Error(ErrorKind::kSetTooLarge, "|U| = " + std::to_string(total) + " exceeds cap " +
                                             std::to_string(cap));
  }
  const int m = num_actions;
  counts_.resize(m, static_cast<Eigen::Index>(total));

  // Odometer over (k_2, ..., k_m) with k_m most significant; k_1 absorbs the
  // remainder, so consecutive vectors increase in colex order.
  Eigen::VectorXi k = Eigen::VectorXi::Zero(m);
  k(0) = support;
  for (Eigen::Index col = 0; col < counts_.cols(); ++col) {
    counts_.col(col) = k;
    if (m == 1) break;
    // Advance: find the lowest position i >= 1 that can be incremented.
    int i = 1;
    for (; i < m; ++i) {
      const int tail = k.segment(i, m - i).sum();
      if (tail < support) break;
    }
    if (i == m) break;
    k(i) += 1;
    for (int j = 1; j < i; ++j) k(j) = 0;
    k(0) = support - k.segment(1, m - 1).sum();
  }
  strategies_ = counts_.cast<double>() / static_cast<double>(support);
}

StrategyIndex UniformStrategySet::index_of_counts(const Eigen::Ref<const Eigen::VectorXi>& k) const {
  if (k.size() != num_actions_ || (k.array() < 0).any() || k.sum() != support_) {
    throw Error(ErrorKind::kInvalidStrategy, "count vector is not a size-b composition");
  }
  // Rank in colex order: at each position i from the top down, count the
  // compositions that agree above i and are smaller at i.
  std::uint64_t rank = 0;
  int remaining = support_;
  for (int i = num_actions_ - 1; i >= 1; --i) {
    for (int smaller = 0; smaller < k(i); ++smaller) {
      // Compositions of (remaining − smaller) into i parts.
      rank += count_uniform(i, remaining - smaller);
    }
    remaining -= k(i);
  }
  return static_cast<StrategyIndex>(rank);
}

StrategyIndex UniformStrategySet::index_of(const Eigen::Ref<const Eigen::VectorXd>& strategy) const {
  if (strategy.size() != num_actions_) {
    throw Error(ErrorKind::kInvalidStrategy, "strategy length mismatch");
  }
  Eigen::VectorXi k(num_actions_);
  for (int i = 0; i < num_actions_; ++i) {
    const double scaled = strategy(i) * support_;
    k(i) = static_cast<int>(std::lround(scaled));
    if (std::abs(scaled - k(i)) > 1e-6) {
      throw Error(ErrorKind::kInvalidStrategy, "strategy is not b-uniform");
    }
  }
  return index_of_counts(k);
}

}  // namespace treenash
