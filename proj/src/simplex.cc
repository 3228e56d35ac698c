#include "treenash/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace treenash {
namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr int kDegenerateStreakForBland = 50;

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double residual_at(const Eigen::MatrixXd& eq, const Eigen::VectorXd& eq_rhs,
                   const Eigen::MatrixXd& le, const Eigen::VectorXd& le_rhs,
                   const Eigen::VectorXd& x) {
  double worst = 0.0;
  if (x.size() > 0) worst = std::max(worst, -x.minCoeff());
  if (eq.rows() > 0) worst = std::max(worst, (eq * x - eq_rhs).cwiseAbs().maxCoeff());
  if (le.rows() > 0) worst = std::max(worst, (le * x - le_rhs).maxCoeff());
  return worst;
}

}  // namespace

PhaseOneResult find_feasible_point(const Eigen::MatrixXd& equality,
                                   const Eigen::VectorXd& equality_rhs,
                                   const Eigen::MatrixXd& inequality,
                                   const Eigen::VectorXd& inequality_rhs, double tolerance,
                                   int max_pivots) {
  const int n = static_cast<int>(std::max(equality.cols(), inequality.cols()));
  const int num_eq = static_cast<int>(equality.rows());
  const int num_le = static_cast<int>(inequality.rows());
  const int rows = num_eq + num_le;

  // Columns: structural | slacks | artificials | rhs.
  std::vector<int> artificial_row;
  for (int i = 0; i < num_eq; ++i) artificial_row.push_back(i);
  for (int i = 0; i < num_le; ++i) {
    if (inequality_rhs(i) < 0) artificial_row.push_back(num_eq + i);
  }
  const int num_art = static_cast<int>(artificial_row.size());
  const int slack0 = n;
  const int art0 = n + num_le;
  const int cols = art0 + num_art;
  const int rhs = cols;

  Tableau t = Tableau::Zero(rows + 1, cols + 1);
  std::vector<int> basis(rows, -1);
  for (int i = 0; i < num_eq; ++i) {
    const double sign = equality_rhs(i) < 0 ? -1.0 : 1.0;
    t.row(i).head(equality.cols()) = sign * equality.row(i);
    t(i, rhs) = sign * equality_rhs(i);
  }
  for (int i = 0; i < num_le; ++i) {
    const double sign = inequality_rhs(i) < 0 ? -1.0 : 1.0;
    t.row(num_eq + i).head(inequality.cols()) = sign * inequality.row(i);
    t(num_eq + i, slack0 + i) = sign;
    t(num_eq + i, rhs) = sign * inequality_rhs(i);
    if (sign > 0) basis[num_eq + i] = slack0 + i;
  }
  for (int a = 0; a < num_art; ++a) {
    t(artificial_row[a], art0 + a) = 1.0;
    basis[artificial_row[a]] = art0 + a;
  }
  // Objective row holds reduced costs of  min Σ artificials.
  auto objective = t.row(rows);
  for (int a = 0; a < num_art; ++a) objective -= t.row(artificial_row[a]);
  for (int a = 0; a < num_art; ++a) objective(art0 + a) = 0.0;

  PhaseOneResult result;
  int degenerate_streak = 0;
  while (true) {
    const bool bland = degenerate_streak >= kDegenerateStreakForBland;
    int entering = -1;
    double best = -kPivotTolerance;
    for (int j = 0; j < cols; ++j) {
      const double rc = t(rows, j);
      if (rc < best) {
        entering = j;
        if (bland) break;
        best = rc;
      }
    }
    if (entering < 0) break;
    if (result.pivots >= max_pivots) {
      result.status = PhaseOneStatus::kNumericalFailure;
      return result;
    }

    int leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
      const double a = t(i, entering);
      if (a <= kPivotTolerance) continue;
      const double ratio = t(i, rhs) / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && leaving >= 0 && basis[i] < basis[leaving])) {
        best_ratio = std::min(best_ratio, ratio);
        leaving = i;
      }
    }
    if (leaving < 0) {
      // Unbounded direction cannot occur for a bounded-below objective.
      result.status = PhaseOneStatus::kNumericalFailure;
      return result;
    }
    degenerate_streak = best_ratio <= 1e-12 ? degenerate_streak + 1 : 0;

    const double pivot = t(leaving, entering);
    t.row(leaving) /= pivot;
    for (int i = 0; i <= rows; ++i) {
      if (i == leaving) continue;
      const double factor = t(i, entering);
      if (factor != 0.0) t.row(i) -= factor * t.row(leaving);
    }
    basis[leaving] = entering;
    ++result.pivots;
  }

  result.infeasibility = -t(rows, rhs);
  result.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < n) result.x(basis[i]) = std::max(0.0, t(i, rhs));
  }
  result.max_residual = residual_at(equality, equality_rhs, inequality, inequality_rhs, result.x);
  if (result.infeasibility > tolerance) {
    result.status = PhaseOneStatus::kInfeasible;
  } else if (result.max_residual > tolerance) {
    result.status = PhaseOneStatus::kNumericalFailure;
  } else {
    result.status = PhaseOneStatus::kFeasible;
  }
  return result;
}

}  // namespace treenash
