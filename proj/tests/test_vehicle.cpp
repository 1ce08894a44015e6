#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rulecbf/vehicle.hpp"

using namespace rulecbf;

TEST(Drift, StraightPathZeroSteer) {
  VehicleState x;
  x.v = 1.0;
  const auto f = drift_f(x, 0.0);
  const std::array<double, 7> expect{1, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(f[i], expect[i]);
}

TEST(Drift, ZeroSpeedHasNoKinematicMotion) {
  VehicleState x;
  x.delta = 0.4;
  x.mu = 0.3;
  x.d = 1.0;
  const auto f = drift_f(x, 0.0);
  EXPECT_EQ(f[kS], 0.0);
  EXPECT_EQ(f[kD], 0.0);
  EXPECT_EQ(f[kMu], 0.0);
}

TEST(Drift, CurvatureDenominator) {
  VehicleState x;
  x.d = 1.0;
  x.v = 2.0;
  const auto f = drift_f(x, 0.1);
  EXPECT_NEAR(f[kS], 2.0 / 0.9, 1e-12);
  EXPECT_NEAR(f[kMu], -0.1 * 2.0 / 0.9, 1e-12);
}

TEST(Drift, SingularityGuardThrows) {
  VehicleState x;
  x.d = 10.0;
  x.v = 1.0;
  EXPECT_THROW(drift_f(x, 0.1), SingularityError);
  x.d = 10.0 - 5e-6;  // 1 - d*kappa = 5e-7 < guard
  EXPECT_THROW(drift_f(x, 0.1), SingularityError);
}

TEST(Drift, SlipAngleMatchesHandValue) {
  VehicleState x;
  x.v = 3.0;
  x.delta = 0.2;
  const double beta = std::atan(0.5 * std::tan(0.2));
  const auto f = drift_f(x, 0.0);
  EXPECT_NEAR(f[kD], 3.0 * std::sin(beta), 1e-15);
  EXPECT_NEAR(f[kMu], 3.0 / 2.0 * std::sin(beta), 1e-15);
}

TEST(Rk4, StraightMotionAdvancesByVdt) {
  VehicleState x;
  x.v = 3.0;
  const auto y = rk4_step(x, {}, 0.0, 0.1);
  EXPECT_NEAR(y.s, 0.3, 1e-15);
  EXPECT_EQ(y.d, 0.0);
  EXPECT_EQ(y.mu, 0.0);
}

TEST(Rk4, LongitudinalChainIsExact) {
  VehicleState x;
  x.v = 2.0;
  x.a = 0.5;
  const double dt = 0.37, j = -1.3;
  const auto y = rk4_step(x, {j, 0.0}, 0.0, dt);
  EXPECT_NEAR(y.v, 2.0 + 0.5 * dt + j * dt * dt / 2.0, 1e-12);
  EXPECT_NEAR(y.a, 0.5 + j * dt, 1e-12);
  // s is the cubic integral of v; RK4 is exact for it too.
  EXPECT_NEAR(y.s, 2.0 * dt + 0.5 * dt * dt / 2.0 + j * dt * dt * dt / 6.0, 1e-12);
}

TEST(Rk4, FifthOrderLocalError) {
  // Local error of one step shrinks ~32x when dt halves.
  VehicleState x{0.0, 0.3, 0.1, 4.0, 0.5, 0.2, -0.1};
  const ControlInput u{0.7, -0.4};
  const double kappa = 0.05;
  auto fine = [&](double dt) {
    VehicleState y = x;
    for (int i = 0; i < 100; ++i) y = rk4_step(y, u, kappa, dt / 100.0);
    return y;
  };
  auto err = [&](double dt) {
    const auto a = rk4_step(x, u, kappa, dt);
    const auto b = fine(dt);
    return std::abs(a.s - b.s) + std::abs(a.d - b.d) + std::abs(a.mu - b.mu);
  };
  const double e1 = err(0.4), e2 = err(0.2);
  EXPECT_GT(e1 / e2, 20.0);
  EXPECT_LT(e1 / e2, 45.0);
}

TEST(Rk4, InvariantsOnStraightRoad) {
  VehicleState x{0.0, 0.4, 0.0, 2.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 50; ++i) {
    const auto y = rk4_step(x, {0.3, 0.0}, 0.0, 0.1);
    EXPECT_EQ(y.d, 0.4);
    EXPECT_EQ(y.mu, 0.0);
    EXPECT_GT(y.s, x.s);
    x = y;
  }
}

TEST(Rk4, RejectsNonPositiveStep) { EXPECT_THROW(rk4_step({}, {}, 0.0, 0.0), std::invalid_argument); }

TEST(Rk4, InertialTwinAgreesWithFrenetOnStraightPath) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    VehicleState f{0.0, 0.5 * U(rng), 0.3 * U(rng), 3.0 + U(rng), U(rng), 0.3 * U(rng), 0.2 * U(rng)};
    InertialState g{f.s, f.d, f.mu, f.v, f.a, f.delta, f.omega};
    const ControlInput u{2.0 * U(rng), U(rng)};
    for (int k = 0; k < 10; ++k) {
      f = rk4_step(f, u, 0.0, 0.1);
      g = rk4_step_inertial(g, u, 0.1);
    }
    EXPECT_NEAR(f.s, g.x, 1e-12);
    EXPECT_NEAR(f.d, g.y, 1e-12);
    EXPECT_NEAR(f.mu, g.theta, 1e-12);
    EXPECT_NEAR(f.v, g.v, 1e-12);
  }
}

TEST(Limits, ValidateAndClamp) {
  Limits lim;
  EXPECT_NO_THROW(lim.validate());
  Limits bad = lim;
  bad.v_min = 11.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  const auto u = lim.clamp(ControlInput{9.0, -9.0});
  EXPECT_EQ(u.jerk, 4.0);
  EXPECT_EQ(u.steer, -2.0);
  EXPECT_TRUE(lim.control_within(u));
  VehicleState x;
  x.v = -0.1;
  x.omega = 0.7;
  const auto y = lim.clamp(x);
  EXPECT_EQ(y.v, 0.0);
  EXPECT_EQ(y.omega, 0.5);
}

TEST(Angles, Wrap) {
  EXPECT_NEAR(std::abs(wrap_angle(3.0 * M_PI)), M_PI, 1e-12);
  EXPECT_NEAR(wrap_angle(-0.5), -0.5, 1e-15);
  EXPECT_NEAR(wrap_angle(2.0 * M_PI + 0.25), 0.25, 1e-12);
}
