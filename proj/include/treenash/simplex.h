#ifndef TREENASH_SIMPLEX_H_
#define TREENASH_SIMPLEX_H_

#include <Eigen/Dense>

namespace treenash {

enum class PhaseOneStatus { kFeasible, kInfeasible, kNumericalFailure };

struct PhaseOneResult {
  PhaseOneStatus status = PhaseOneStatus::kInfeasible;
  Eigen::VectorXd x;          // a feasible point when status == kFeasible
  double infeasibility = 0;   // optimal total artificial mass
  double max_residual = 0;    // recomputed from the original rows at x
  int pivots = 0;
};

// Finds x >= 0 with  equality * x = equality_rhs  and  inequality * x <=
// inequality_rhs  by minimising the total artificial mass with a dense tableau
// simplex. Feasible iff that optimum is <= tolerance and the recomputed
// residual is too. Pivoting is Dantzig's rule with lowest-index ties, falling
// back to Bland's rule after a run of degenerate pivots, so results are
// deterministic.
PhaseOneResult find_feasible_point(const Eigen::MatrixXd& equality,
                                   const Eigen::VectorXd& equality_rhs,
                                   const Eigen::MatrixXd& inequality,
                                   const Eigen::VectorXd& inequality_rhs, double tolerance,
                                   int max_pivots = 50'000);

}  // namespace treenash

#endif  // TREENASH_SIMPLEX_H_
