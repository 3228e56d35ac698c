#include "treenash/oracle.h"

#include <string>

#include "treenash/error.h"

namespace treenash {
namespace {

void check_cap(const Game& game, const UniformStrategySet& uset, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int p = 0; p < game.num_players(); ++p) {
    if (total > cap / static_cast<std::uint64_t>(uset.size())) {
      throw Error(ErrorKind::kCapExceeded, "|U|^n exceeds oracle cap " + std::to_string(cap));
    }
    total *= static_cast<std::uint64_t>(uset.size());
  }
}

// Calls visit(indices) on every profile in order until it returns false.
template <typename Visit>
void for_each_profile(const Game& game, const UniformStrategySet& uset, Visit visit) {
  const int n = game.num_players();
  std::vector<StrategyIndex> indices(n, 0);
  Profile<double> profile(n, Eigen::VectorXd(uset.at(0)));
  while (true) {
    if (!visit(indices, profile)) return;
    int p = n - 1;
    for (; p >= 0; --p) {
      if (++indices[p] < uset.size()) {
        profile[p] = uset.at(indices[p]);
        break;
      }
      indices[p] = 0;
      profile[p] = uset.at(0);
    }
    if (p < 0) return;
  }
}

bool is_equilibrium(const Game& game, const Profile<double>& profile, double epsilon) {
  for (PlayerId p = 0; p < game.num_players(); ++p) {
    if (regret(game, p, profile) > epsilon + kVerifyTolerance) return false;
  }
  return true;
}

}  // namespace

std::optional<std::vector<StrategyIndex>> exhaustive_search(const Game& game, double epsilon,
                                                            const UniformStrategySet& uset,
                                                            std::uint64_t cap) {
  check_cap(game, uset, cap);
  std::optional<std::vector<StrategyIndex>> found;
  for_each_profile(game, uset, [&](const auto& indices, const auto& profile) {
    if (is_equilibrium(game, profile, epsilon)) {
      found = indices;
      return false;
    }
    return true;
  });
  return found;
}

std::vector<std::vector<StrategyIndex>> all_equilibria(const Game& game, double epsilon,
                                                       const UniformStrategySet& uset,
                                                       std::uint64_t cap) {
  check_cap(game, uset, cap);
  std::vector<std::vector<StrategyIndex>> out;
  for_each_profile(game, uset, [&](const auto& indices, const auto& profile) {
    if (is_equilibrium(game, profile, epsilon)) out.push_back(indices);
    return true;
  });
  return out;
}

Profile<double> profile_from_indices(const UniformStrategySet& uset,
                                     const std::vector<StrategyIndex>& indices) {
  Profile<double> profile;
  for (StrategyIndex i : indices) profile.emplace_back(uset.at(i));
  return profile;
}

Verification verify_profile(const Game& game, const Profile<double>& profile, double epsilon) {
  validate_profile(game, profile);
  Verification v;
  v.regrets = regrets(game, profile);
  v.max_regret = v.regrets.size() ? v.regrets.maxCoeff() : 0.0;
  v.accepted = v.max_regret <= epsilon + kVerifyTolerance;
  return v;
}

}  // namespace treenash
