#ifndef TREENASH_UNIFORM_H_
#define TREENASH_UNIFORM_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace treenash {

using StrategyIndex = int;

enum class SupportSizing {
  kHalfEpsilon,  // sized so that an ε/2-equilibrium lives in U (default)
  kRawEpsilon,   // the set U as sized for an ε-equilibrium
};

// ceil(8 (ln m + ln n − ln ε' + ln 8) / ε'^2) with ε' = ε/2 by default.
int support_size(int num_actions, int num_players, double epsilon,
                 SupportSizing sizing = SupportSizing::kHalfEpsilon);

// C(m+b−1, m−1), exact. Throws kOverflow beyond 64 bits.
std::uint64_t count_uniform(int num_actions, int support);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// All b-uniform strategies over m actions, in increasing colexicographic
// order of their count vectors (the last action's count is most significant).
// Column i of strategies() is strategy i; counts() holds the integer
// multiplicities.
class UniformStrategySet {
 public:
  UniformStrategySet(int num_actions, int support,
                     std::uint64_t cap = kDefaultEnumerationCap);

  int num_actions() const { return num_actions_; }
  int support() const { return support_; }
  int size() const { return static_cast<int>(strategies_.cols()); }

  const Eigen::MatrixXd& strategies() const { return strategies_; }
  const Eigen::MatrixXi& counts() const { return counts_; }
  Eigen::MatrixXd::ConstColXpr at(StrategyIndex i) const { return strategies_.col(i); }

  // Inverse of at(); throws kInvalidStrategy if the vector is not b-uniform.
  StrategyIndex index_of(const Eigen::Ref<const Eigen::VectorXd>& strategy) const;
  StrategyIndex index_of_counts(const Eigen::Ref<const Eigen::VectorXi>& counts) const;

 private:
  int num_actions_;
  int support_;
  Eigen::MatrixXi counts_;
  Eigen::MatrixXd strategies_;
};

inline UniformStrategySet enumerate_uniform(int num_actions, int support,
                                            std::uint64_t cap = kDefaultEnumerationCap) {
  return UniformStrategySet(num_actions, support, cap);
}

}  // namespace treenash

#endif  // TREENASH_UNIFORM_H_
