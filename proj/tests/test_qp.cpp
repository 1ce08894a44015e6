#include <gtest/gtest.h>

#include <random>

#include "oracles/qp_fixtures.hpp"
#include "rulecbf/qp.hpp"

using namespace rulecbf;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using oracle::oracle_solve;
using oracle::random_qp;

TEST(Qp, ProjectionOntoHalfLine) {
  QpProblem p = QpProblem::with_size(1);
  p.A = MatrixXd::Constant(1, 1, -1.0);  // -u <= -1
  p.b = VectorXd::Constant(1, -1.0);
  QpSolver s;
  const auto sol = s.solve(p);
  ASSERT_EQ(sol.status, QpStatus::kOptimal);
  EXPECT_NEAR(sol.x[0], 1.0, 1e-14);
  EXPECT_NEAR(sol.lambda[0], 1.0, 1e-14);
  EXPECT_TRUE(kkt_check(p, sol, 1e-12));
}

TEST(Qp, ContradictoryHalfPlanesAreInfeasible) {
  QpProblem p = QpProblem::with_size(2);
  p.A.resize(2, 2);
  p.A << 1, 1, -1, -1;
  p.b = VectorXd(2);
  p.b << -1, -2;
  QpSolver s;
  const auto sol = s.solve(p);
  ASSERT_EQ(sol.status, QpStatus::kInfeasible);
  // Farkas certificate over (rows, ub, lb): y >= 0, A'y = 0, b'y < 0.
  const VectorXd y = sol.certificate.head(2);
  EXPECT_TRUE((y.array() >= 0).all());
  EXPECT_LT((p.A.transpose() * y).norm(), 1e-12);
  EXPECT_LT(p.b.dot(y), 0.0);
}

TEST(Qp, InfeasibleAgainstBox) {
  QpProblem p = QpProblem::with_size(2);
  p.lb << -1, -1;
  p.ub << 1, 1;
  p.A = MatrixXd(1, 2);
  p.A << 1, 1;
  p.b = VectorXd::Constant(1, -3.0);
  QpSolver s;
  EXPECT_EQ(s.solve(p).status, QpStatus::kInfeasible);
}

TEST(Qp, ZeroProblemKkt) {
  QpProblem p = QpProblem::with_size(3);
  EXPECT_TRUE(kkt_check(p, VectorXd::Zero(3), VectorXd(0), VectorXd::Zero(3), VectorXd::Zero(3), 1e-12));
}

TEST(Qp, MatchesInteriorPointOracle) {
  std::mt19937 rng(42);
  QpSolver s;
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + t % 7;
    const int m = 5 + (t * 7) % 36;
    const QpProblem p = random_qp(rng, n, m, t % 3 == 0);
    const auto sol = s.solve(p);
    ASSERT_EQ(sol.status, QpStatus::kOptimal) << "trial " << t;
    const auto ref = oracle_solve(p);
    ASSERT_TRUE(ref.converged) << "oracle trial " << t;
    EXPECT_NEAR(sol.objective, ref.objective, 1e-6 * (1.0 + std::abs(ref.objective))) << "trial " << t;
    EXPECT_TRUE(kkt_check(p, sol, 1e-8)) << "trial " << t << " residual "
                                         << kkt_residuals(p, sol.x, sol.lambda, sol.lambda_ub, sol.lambda_lb).max();
  }
}

TEST(Qp, PerturbationBreaksKkt) {
  std::mt19937 rng(9);
  QpSolver s;
  const QpProblem p = random_qp(rng, 5, 12, false);
  const auto sol = s.solve(p);
  ASSERT_EQ(sol.status, QpStatus::kOptimal);
  // Descent direction of the objective: -(Hx + f) is zero at an interior
  // optimum, so step against the multiplier-weighted normal instead.
  VectorXd dir = p.H * sol.x + p.f;
  if (dir.norm() < 1e-9) dir = VectorXd::Ones(5);
  VectorXd x = sol.x - 1e-2 * dir.normalized();
  EXPECT_FALSE(kkt_check(p, x, sol.lambda, sol.lambda_ub, sol.lambda_lb, 1e-8));
}

TEST(Qp, DeterministicAndScaleInvariant) {
  std::mt19937 rng(5);
  QpSolver s;
  for (int t = 0; t < 20; ++t) {
    const QpProblem p = random_qp(rng, 6, 20, true);
    const auto a = s.solve(p);
    const auto b = s.solve(p);
    ASSERT_EQ(a.status, QpStatus::kOptimal);
    EXPECT_EQ(a.x, b.x);  // bit-identical
    QpProblem scaled = p;
    scaled.H *= 7.5;
    scaled.f *= 7.5;
    const auto c = s.solve(scaled);
    EXPECT_LT((c.x - a.x).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(Qp, RedundantRowDoesNotMoveSolution) {
  std::mt19937 rng(6);
  QpSolver s;
  for (int t = 0; t < 20; ++t) {
    QpProblem p = random_qp(rng, 5, 10, false);
    const auto a = s.solve(p);
    ASSERT_EQ(a.status, QpStatus::kOptimal);
    // Dominated copy of row 0 with a looser bound.
    p.A.conservativeResize(p.A.rows() + 1, Eigen::NoChange);
    p.b.conservativeResize(p.b.size() + 1);
    p.A.row(p.A.rows() - 1) = p.A.row(0);
    p.b[p.b.size() - 1] = p.b[0] + 1.0;
    const auto b = s.solve(p);
    EXPECT_LT((b.x - a.x).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(Qp, RejectsMalformedInput) {
  QpProblem p = QpProblem::with_size(2);
  p.A = MatrixXd::Zero(1, 3);
  p.b = VectorXd::Zero(1);
  QpSolver s;
  EXPECT_THROW(s.solve(p), std::invalid_argument);
}
