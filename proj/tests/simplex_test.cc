#include "treenash/simplex.h"

#include <gtest/gtest.h>

#include "treenash/random.h"

namespace treenash {
namespace {

TEST(SimplexTest, SimpleFeasibleSystem) {
  // x0 + x1 = 1, x0 − x1 <= −0.2  →  x1 >= 0.6.
  Eigen::MatrixXd eq(1, 2);
  eq << 1, 1;
  Eigen::MatrixXd le(1, 2);
  le << 1, -1;
  const auto r = find_feasible_point(eq, Eigen::VectorXd::Ones(1), le,
                                     Eigen::VectorXd::Constant(1, -0.2), 1e-9);
  ASSERT_EQ(r.status, PhaseOneStatus::kFeasible);
  EXPECT_NEAR(r.x.sum(), 1.0, 1e-12);
  EXPECT_GE(r.x(1), 0.6 - 1e-12);
  EXPECT_LE(r.max_residual, 1e-9);
}

TEST(SimplexTest, Infeasible) {
  // x0 + x1 = 1 and x0 + x1 <= 0.5.
  Eigen::MatrixXd eq(1, 2);
  eq << 1, 1;
  Eigen::MatrixXd le(1, 2);
  le << 1, 1;
  const auto r = find_feasible_point(eq, Eigen::VectorXd::Ones(1), le,
                                     Eigen::VectorXd::Constant(1, 0.5), 1e-9);
  EXPECT_EQ(r.status, PhaseOneStatus::kInfeasible);
  EXPECT_NEAR(r.infeasibility, 0.5, 1e-9);
}

TEST(SimplexTest, NegativeRhsEqualityAndNoInequalities) {
  Eigen::MatrixXd eq(2, 3);
  eq << -1, -1, 0, 0, 1, -1;
  Eigen::VectorXd rhs(2);
  rhs << -2, 0.5;
  const auto r = find_feasible_point(eq, rhs, Eigen::MatrixXd(0, 3), Eigen::VectorXd(0), 1e-9);
  ASSERT_EQ(r.status, PhaseOneStatus::kFeasible);
  EXPECT_NEAR((eq * r.x - rhs).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

// Random systems built around a known nonnegative point are always feasible,
// and the returned point satisfies every row.
TEST(SimplexTest, RandomFeasibleSystems) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const int n = 3 + static_cast<int>(uniform_index(rng, 12));
    const int e = 1 + static_cast<int>(uniform_index(rng, n - 1));
    const int l = static_cast<int>(uniform_index(rng, 6));
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
    Eigen::MatrixXd eq(e, n), le(l, n);
    for (int i = 0; i < e; ++i)
      for (int j = 0; j < n; ++j) eq(i, j) = uniform01(rng) * 2 - 1;
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < n; ++j) le(i, j) = uniform01(rng) * 2 - 1;
    const Eigen::VectorXd eq_rhs = eq * x0;
    const Eigen::VectorXd le_rhs = le * x0 + Eigen::VectorXd::Constant(l, 0.01);
    const auto r = find_feasible_point(eq, eq_rhs, le, le_rhs, 1e-7);
    ASSERT_EQ(r.status, PhaseOneStatus::kFeasible) << seed;
    EXPECT_LE(r.max_residual, 1e-7);
    EXPECT_GE(r.x.minCoeff(), 0.0);

    // Same inputs, same vertex.
    const auto again = find_feasible_point(eq, eq_rhs, le, le_rhs, 1e-7);
    EXPECT_EQ(r.x, again.x);
  }
}

}  // namespace
}  // namespace treenash
