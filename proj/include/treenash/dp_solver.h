#ifndef TREENASH_DP_SOLVER_H_
#define TREENASH_DP_SOLVER_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "treenash/game.h"
#include "treenash/lp.h"
#include "treenash/tree.h"
#include "treenash/uniform.h"

namespace treenash {

// Use as lp_threshold to disable the LP path entirely.
inline constexpr int kNoLpThreshold = std::numeric_limits<int>::max();
inline constexpr std::uint64_t kDefaultExhaustiveCap = 10'000'000;

struct SolverConfig {
  double epsilon = 0.5;
  std::optional<int> support_override;
  SupportSizing sizing = SupportSizing::kHalfEpsilon;
  // Child count at which the LP path is tried first. Defaults to
  // ceil(24 ln m / ε²), never below 2.
  std::optional<int> lp_threshold;
  int max_tries = kDefaultMaxTries;
  double lp_tolerance = kDefaultLpTolerance;
  std::uint64_t rng_seed = 0;
  // Search-tree nodes one exhaustive membership test may visit.
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  int thread_count = 1;
  std::optional<PlayerId> root;
};

int default_lp_threshold(int num_actions, double epsilon);
int effective_lp_threshold(const SolverConfig& config, int num_actions);
void validate_config(const SolverConfig& config);

struct SolveStats {
  std::uint64_t lp_calls = 0;
  std::uint64_t lp_feasible = 0;
  std::uint64_t numerical_failures = 0;
  std::uint64_t roundings = 0;
  std::uint64_t samples = 0;
  std::uint64_t fallbacks = 0;  // LP path tried, answer came from exhaustive search
  std::uint64_t exhaustive_calls = 0;
  double max_lp_residual = 0;   // recomputed independently for each LP solution

  std::uint64_t resamples() const { return samples - roundings; }
  void merge(const SolveStats& other);
};

enum class ExtensionSource : std::uint8_t { kExhaustive, kLp };

// U_{p,q}(z) for every non-root q (its parent p is implicit) as one bitset
// over y per z, plus the witnesses E_{p,q}(z, y) of internal q.
class CandidateTables {
 public:
  CandidateTables(int num_players, int set_size);

  int set_size() const { return set_size_; }
  bool contains(PlayerId q, StrategyIndex z, StrategyIndex y) const;
  // y-indices of U_{p,q}(z), ascending.
  CandidateList candidates(PlayerId q, StrategyIndex z) const;
  std::size_t count(PlayerId q, StrategyIndex z) const;

  struct StoredExtension {
    std::vector<StrategyIndex> strategies;  // aligned with children of q
    ExtensionSource source;
  };
  const StoredExtension* extension(PlayerId q, StrategyIndex z, StrategyIndex y) const;

  void insert(PlayerId q, StrategyIndex z, StrategyIndex y);
  void insert(PlayerId q, StrategyIndex z, StrategyIndex y, StoredExtension ext);

 private:
  std::size_t words() const { return (static_cast<std::size_t>(set_size_) + 63) / 64; }
  std::uint64_t key(PlayerId q, StrategyIndex z, StrategyIndex y) const;

  int set_size_;
  std::vector<std::vector<std::uint64_t>> bits_;  // per q: set_size * words()
  std::unordered_map<std::uint64_t, StoredExtension> extensions_;
};

// Everything a membership test at q needs for one fixed y: each child's
// candidate list U_{q,c}(y) and the payoff columns A_{q,c} x for each
// candidate x.
struct ChildCandidates {
  PlayerId child = 0;
  CandidateList candidates;
  Eigen::MatrixXd payoffs;  // m × |candidates|
};

std::vector<ChildCandidates> gather_child_candidates(const Game& game, const RootedTree& rooted,
                                                     const UniformStrategySet& uset,
                                                     const CandidateTables& tables, PlayerId q,
                                                     StrategyIndex y);

// First tuple, in lexicographic order with the first child most significant,
// making y an ε-best response against the tuple plus the parent payoff vector
// h = A_{q,p} z (zero at the root). Infeasible subtrees are pruned with
// per-action upper bounds, which never skips the first solution. Throws
// kCapExceeded once more than `cap` search nodes are visited.
std::optional<std::vector<StrategyIndex>> exhaustive_search_children(
    const std::vector<ChildCandidates>& children, const Eigen::VectorXd& parent_payoff,
    const Eigen::VectorXd& y, double epsilon, std::uint64_t cap);

std::optional<Extension> exhaustive_membership(const Game& game, const RootedTree& rooted,
                                               const UniformStrategySet& uset,
                                               const CandidateTables& tables, PlayerId q,
                                               std::optional<StrategyIndex> z, StrategyIndex y,
                                               double epsilon, std::uint64_t cap);

struct MembershipResult {
  std::optional<Extension> extension;
  ExtensionSource source = ExtensionSource::kExhaustive;
};

// Membership test for q with the parent playing z (absent at the root): LP first
// when q has at least lp_threshold children, exhaustive otherwise or as the
// fallback. Any returned extension has been re-verified.
MembershipResult membership_test(const Game& game, const RootedTree& rooted,
                                 const UniformStrategySet& uset, const CandidateTables& tables,
                                 PlayerId q, std::optional<StrategyIndex> z, StrategyIndex y,
                                 const SolverConfig& config, SolveStats* stats = nullptr);

CandidateTables build_tables(const Game& game, const RootedTree& rooted,
                             const UniformStrategySet& uset, const SolverConfig& config,
                             SolveStats* stats = nullptr);

struct RootChoice {
  StrategyIndex y = 0;
  Extension extension;
  ExtensionSource source = ExtensionSource::kExhaustive;
};

// First y in canonical order admitting an extension at the root; throws
// kNoEquilibriumFound if none does.
RootChoice process_root(const Game& game, const RootedTree& rooted, const UniformStrategySet& uset,
                        const CandidateTables& tables, const SolverConfig& config,
                        SolveStats* stats = nullptr);

// Walks the tables top-down from the root choice and returns one U-index per
// player. Throws kMissingExtension on a table inconsistency.
std::vector<StrategyIndex> backtrack_indices(const RootedTree& rooted, const CandidateTables& tables,
                                             const RootChoice& root,
                                             std::vector<std::string>* provenance = nullptr);

Profile<double> backtrack(const RootedTree& rooted, const CandidateTables& tables,
                          const UniformStrategySet& uset, const RootChoice& root);

struct EquilibriumCertificate {
  Profile<double> profile;
  double epsilon = 0;
  Eigen::VectorXd regrets;
  int support_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> provenance;

  double max_regret() const { return regrets.size() ? regrets.maxCoeff() : 0.0; }
};

struct SolveResult {
  EquilibriumCertificate certificate;
  std::vector<StrategyIndex> indices;  // U-index per player
  SolveStats stats;
  std::vector<std::string> warnings;
};

// validate → size U → tables → root → backtrack → regret check. Throws
// kInternalSoundnessViolation if the assembled profile fails verification.
SolveResult solve(const Game& game, const SolverConfig& config);

}  // namespace treenash

#endif  // TREENASH_DP_SOLVER_H_
