#ifndef TREENASH_LP_H_
#define TREENASH_LP_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "treenash/game.h"
#include "treenash/simplex.h"
#include "treenash/tree.h"
#include "treenash/uniform.h"

namespace treenash {

using CandidateList = std::vector<StrategyIndex>;

// A choice of one strategy (by U-index) per child of some player, aligned
// with `children`.
struct Extension {
  std::vector<PlayerId> children;
  std::vector<StrategyIndex> strategies;

  friend bool operator==(const Extension&, const Extension&) = default;
};

// Feasibility program for "y is extendable at q while the parent plays z":
//
//   Σ_x α_x = 1                         for each child c
//   σ_c − Σ_x α_x x = 0                 for each child c
//   Σ_c (e_j − y)^T A_{q,c} σ_c <= (y − e_j)^T A_{q,p} z + ε/2   for each j
//   α, σ >= 0
//
// Variables are laid out as all α blocks (child by child, candidate order)
// followed by one length-m σ block per child.
struct LpInstance {
  bool trivially_infeasible = false;
  int num_actions = 0;
  PlayerId player = 0;
  std::vector<PlayerId> children;
  std::vector<CandidateList> candidates;
  std::vector<int> alpha_offset;
  int sigma_offset = 0;
  int num_variables = 0;

  Eigen::MatrixXd equality;
  Eigen::VectorXd equality_rhs;
  Eigen::MatrixXd best_response;
  Eigen::VectorXd best_response_rhs;

  int sigma_index(int child, int action) const { return sigma_offset + child * num_actions + action; }
};

// A feasible point of LpInstance read back per child: α^c is a distribution
// over candidates[c] and σ_c its mean strategy.
struct FractionalExtension {
  std::vector<PlayerId> children;
  std::vector<CandidateList> candidates;
  std::vector<Eigen::VectorXd> alpha;
  std::vector<Eigen::VectorXd> sigma;
};

struct LpDiagnostics {
  PhaseOneStatus status = PhaseOneStatus::kInfeasible;
  int pivots = 0;
  double solver_residual = 0;
};

inline constexpr double kDefaultLpTolerance = 1e-7;
inline constexpr int kDefaultMaxTries = 64;

// parent_strategy must be present iff q has a parent in `rooted`. An empty
// candidate list for any child yields a trivially infeasible instance.
LpInstance build_lp(const Game& game, const RootedTree& rooted, PlayerId q,
                    const std::optional<Eigen::VectorXd>& parent_strategy,
                    const Eigen::VectorXd& y, const UniformStrategySet& uset,
                    const std::vector<CandidateList>& candidate_sets, double epsilon);

// Absent when infeasible. A solver failure is also reported as absent, with
// diagnostics->status == kNumericalFailure.
std::optional<FractionalExtension> solve_feasibility(const LpInstance& instance,
                                                     double tolerance = kDefaultLpTolerance,
                                                     LpDiagnostics* diagnostics = nullptr);

// Largest violation of the program's constraints by `frac`, recomputed from
// the game and U directly rather than from the instance's matrices.
double fractional_residual(const Game& game, const RootedTree& rooted, PlayerId q,
                           const std::optional<Eigen::VectorXd>& parent_strategy,
                           const Eigen::VectorXd& y, const UniformStrategySet& uset,
                           const FractionalExtension& frac, double epsilon);

struct RoundingOutcome {
  std::optional<Extension> extension;
  int tries = 0;  // samples drawn, including the accepted one
};

// Draws x_c ~ α^c independently per child until y is an ε-best response of q
// against the draw and z, up to max_tries draws.
RoundingOutcome round_extension(const Game& game, const RootedTree& rooted, PlayerId q,
                                const std::optional<Eigen::VectorXd>& parent_strategy,
                                const Eigen::VectorXd& y, const UniformStrategySet& uset,
                                const FractionalExtension& frac, double epsilon,
                                std::uint64_t seed, int max_tries = kDefaultMaxTries);

// max_j |Σ_c e_j^T A_{q,c} x_c − Σ_c e_j^T A_{q,c} σ_c|.
double concentration_deviation(const Game& game, PlayerId q, const UniformStrategySet& uset,
                               const Extension& sampled, const FractionalExtension& frac);

// True iff concentration_deviation <= ε/4.
bool check_concentration_event(const Game& game, PlayerId q, const UniformStrategySet& uset,
                               const Extension& sampled, const FractionalExtension& frac,
                               double epsilon);

// The full neighbourhood of q as seen by an extension: parent (if any) plus
// each child's chosen strategy.
NeighborStrategies<double> neighborhood(const RootedTree& rooted, PlayerId q,
                                        const std::optional<Eigen::VectorXd>& parent_strategy,
                                        const UniformStrategySet& uset, const Extension& ext);

}  // namespace treenash

#endif  // TREENASH_LP_H_
