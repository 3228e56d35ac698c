#ifndef TREENASH_ORACLE_H_
#define TREENASH_ORACLE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "treenash/dp_solver.h"
#include "treenash/game.h"
#include "treenash/uniform.h"

namespace treenash {

inline constexpr std::uint64_t kDefaultOracleCap = 100'000'000;

// Profiles of U^n are visited in lexicographic order of their index tuples,
// player 0 most significant. Both searches throw kCapExceeded when |U|^n
// exceeds `cap`.
std::optional<std::vector<StrategyIndex>> exhaustive_search(const Game& game, double epsilon,
                                                            const UniformStrategySet& uset,
                                                            std::uint64_t cap = kDefaultOracleCap);

std::vector<std::vector<StrategyIndex>> all_equilibria(const Game& game, double epsilon,
                                                       const UniformStrategySet& uset,
                                                       std::uint64_t cap = kDefaultOracleCap);

Profile<double> profile_from_indices(const UniformStrategySet& uset,
                                     const std::vector<StrategyIndex>& indices);

struct Verification {
  bool accepted = false;
  Eigen::VectorXd regrets;
  double max_regret = 0;
};

// Accepts iff every regret is at most ε + 1e-9.
Verification verify_profile(const Game& game, const Profile<double>& profile, double epsilon);

}  // namespace treenash

#endif  // TREENASH_ORACLE_H_
