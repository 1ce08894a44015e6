#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rulecbf/geometry.hpp"

using namespace rulecbf;

namespace {

const Footprint kCar{4.0, 1.8};

// Brute-force distance between rectangle boundaries (and overlap flag).
double sampled_distance(const OrientedRectangle& a, const OrientedRectangle& b, int per_edge) {
  auto boundary = [&](const OrientedRectangle& r) {
    std::vector<Vec2> pts;
    const auto c = r.corners();
    for (int e = 0; e < 4; ++e) {
      for (int k = 0; k < per_edge; ++k) pts.push_back(c[e] + (c[(e + 1) % 4] - c[e]) * (double(k) / per_edge));
    }
    return pts;
  };
  double best = 1e300;
  for (const Vec2& p : boundary(a)) {
    for (const Vec2& q : boundary(b)) best = std::min(best, (p - q).norm());
  }
  return best;
}

}  // namespace

TEST(MinRadius, CarFootprintTwoDisks) {
  EXPECT_NEAR(min_radius(kCar, {}, 2), 1.3453624047073711, 1e-12);
  EXPECT_NEAR(lateral_error(kCar, {}, 2), 0.4453624047073711, 1e-12);
}

TEST(MinRadius, SquareSingleDisk) {
  EXPECT_NEAR(min_radius({2.0, 2.0}, {}, 1), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(lateral_error({2.0, 2.0}, {}, 1), std::sqrt(2.0) - 1.0, 1e-15);
}

TEST(MinRadius, DecreasesTowardsHalfWidth) {
  const ClearancePads pads{0.5, 0.2, 0.3, 0.1};
  double prev = 1e9, prev_sigma = 1e9;
  for (int z = 1; z < 200; ++z) {
    const double r = min_radius(kCar, pads, z);
    const double s = lateral_error(kCar, pads, z);
    EXPECT_LT(r, prev);
    EXPECT_GT(r, (kCar.width + 0.4) / 2.0);
    EXPECT_GE(s, 0.0);
    EXPECT_LT(s, prev_sigma);
    prev = r;
    prev_sigma = s;
  }
}

TEST(MinRadius, RejectsZeroDisks) { EXPECT_THROW(min_radius(kCar, {}, 0), std::invalid_argument); }

TEST(DiskCenters, SingleDiskAtCenter) {
  const auto c = disk_centers({1.0, 2.0, 0.7}, kCar, {}, 1);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].x(), 1.0, 1e-15);
  EXPECT_NEAR(c[0].y(), 2.0, 1e-15);
}

TEST(DiskCenters, TwoDisksHandComputed) {
  const auto c = disk_centers({0.0, 0.0, 0.0}, kCar, {}, 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0].x(), -1.0, 1e-15);
  EXPECT_NEAR(c[1].x(), 1.0, 1e-15);
  EXPECT_EQ(c[0].y(), 0.0);
}

TEST(DiskCenters, FrontBackSwapWithReversedHeading) {
  const ClearancePads p{1.5, 0.3, 0.2, 0.2};
  const ClearancePads q{0.3, 1.5, 0.2, 0.2};
  const auto a = disk_centers({0.5, -1.0, 0.4}, kCar, p, 3);
  const auto b = disk_centers({0.5, -1.0, 0.4 + M_PI}, kCar, q, 3);
  std::vector<Vec2> bs(b.rbegin(), b.rend());
  for (int j = 0; j < 3; ++j) EXPECT_TRUE(a[j].isApprox(bs[j], 1e-12));
}

TEST(OptimizeCover, ZeroBetaPicksOneDisk) {
  const auto c = optimize_cover(kCar, PadRanges::fixed({}), 0.0, 8);
  EXPECT_EQ(c.count, 1);
}

TEST(OptimizeCover, DegenerateRangesMatchScan) {
  std::vector<CoverCost> table;
  const auto c = optimize_cover(kCar, PadRanges::fixed({}), 2.0, 8, &table);
  int best = 1;
  double best_cost = 1e9;
  for (int z = 1; z <= 8; ++z) {
    const double cost = z + 2.0 * lateral_error(kCar, {}, z);
    EXPECT_NEAR(table[z - 1].cost, cost, 1e-12);
    if (cost < best_cost) {
      best_cost = cost;
      best = z;
    }
  }
  EXPECT_EQ(c.count, best);
  EXPECT_EQ(c.count, 2);
  EXPECT_NEAR(c.radius, 1.3453624047073711, 1e-12);
}

TEST(OptimizeCover, QuadratureMatchesFineRiemannSum) {
  // One non-degenerate axis: 5-node Gauss-Legendre vs. a fine midpoint sum.
  PadRanges r = PadRanges::fixed({0.0, 0.0, 0.5, 0.5});
  r.front = {1.0, 21.0};
  std::vector<CoverCost> table;
  optimize_cover(kCar, r, 2.0, 6, &table);
  for (int z = 1; z <= 6; ++z) {
    const int n = 20000;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double h = 1.0 + 20.0 * (k + 0.5) / n;
      acc += lateral_error(kCar, {h, 0.0, 0.5, 0.5}, z) * 20.0 / n;
    }
    EXPECT_NEAR(table[z - 1].sigma_integral, acc, 1e-3 * acc);
  }
}

TEST(OptimizeCover, RejectsBadRanges) {
  PadRanges r;
  r.left = {1.0, 0.0};
  EXPECT_THROW(optimize_cover(kCar, r, 2.0, 4), std::invalid_argument);
  EXPECT_THROW(optimize_cover(kCar, PadRanges{}, 2.0, 0), std::invalid_argument);
}

TEST(Coverage, ExactRadiusPassesShrunkFails) {
  const GlobalPose pose{1.0, -2.0, 0.3};
  const ClearancePads pads{0.4, 0.1, 0.2, 0.3};
  for (int z = 1; z <= 5; ++z) {
    const double r = min_radius(kCar, pads, z);
    const auto c = disk_centers(pose, kCar, pads, z);
    const auto rect = padded_rectangle(pose, kCar, pads);
    EXPECT_TRUE(coverage_check(c, r, rect, 40000));
    EXPECT_FALSE(coverage_check(c, 0.99 * r, rect, 40000));
    const auto c2 = disk_centers(pose, kCar, pads, 2 * z);
    EXPECT_TRUE(coverage_check(c2, r, rect, 40000));
  }
}

TEST(RectDistance, AxisAlignedSquares) {
  const OrientedRectangle a{Vec2(0, 0), 0.0, 0.5, 0.5};
  const OrientedRectangle b{Vec2(3, 0), 0.0, 0.5, 0.5};
  EXPECT_NEAR(rect_rect_distance(a, b), 2.0, 1e-15);
  EXPECT_LT(rect_rect_distance(a, a), 0.0);
  EXPECT_NEAR(rect_rect_distance(a, a), -1.0, 1e-15);
}

TEST(RectDistance, MatchesSampledBoundaryOracle) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> P(-6.0, 6.0), H(-M_PI, M_PI), E(0.3, 2.5);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const OrientedRectangle a{Vec2(P(rng), P(rng)), H(rng), E(rng), E(rng)};
    const OrientedRectangle b{Vec2(P(rng), P(rng)), H(rng), E(rng), E(rng)};
    const double d = rect_rect_distance(a, b);
    if (d <= 0.0) continue;
    EXPECT_NEAR(d, sampled_distance(a, b, 400), 1e-3);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(RectDistance, Disk) {
  const OrientedRectangle a{Vec2(0, 0), 0.0, 2.0, 1.0};
  EXPECT_NEAR(rect_disk_distance(a, Vec2(5, 0), 0.5), 2.5, 1e-15);
  EXPECT_NEAR(rect_disk_distance(a, Vec2(5, 4), 1.0), 3.0 * std::sqrt(2.0) - 1.0, 1e-14);
  EXPECT_LT(rect_disk_distance(a, Vec2(0, 0), 0.3), 0.0);
}

TEST(Directional, AheadAligned) {
  const auto ego = footprint_rectangle({0, 0, 0}, kCar);
  const auto other = footprint_rectangle({9, 0, 0}, kCar);  // 5 m bumper gap
  const auto d = directional_distances(ego, other);
  EXPECT_NEAR(d.front, 5.0, 1e-12);
  EXPECT_EQ(d.left, kNoNeighbour);
  EXPECT_EQ(d.right, kNoNeighbour);
}

TEST(Directional, LeftAndRight) {
  const auto ego = footprint_rectangle({0, 0, 0}, kCar);
  const auto left = directional_distances(ego, footprint_rectangle({0.5, 2.8, 0}, kCar));
  EXPECT_NEAR(left.left, 1.0, 1e-12);
  EXPECT_EQ(left.front, kNoNeighbour);
  const auto right = directional_distances(ego, footprint_rectangle({-1.0, -3.3, M_PI}, kCar));
  EXPECT_NEAR(right.right, 1.5, 1e-12);
  EXPECT_EQ(right.left, kNoNeighbour);
}

TEST(Directional, BehindIsInvisible) {
  const auto ego = footprint_rectangle({0, 0, 0}, kCar);
  const auto d = directional_distances(ego, footprint_rectangle({-8, 0, 0}, kCar));
  EXPECT_EQ(d.front, kNoNeighbour);
  EXPECT_EQ(d.left, kNoNeighbour);
  EXPECT_EQ(d.right, kNoNeighbour);
}

TEST(Infringement, InsideAndOutside) {
  const std::vector<Vec2> lane{{-50, 0}, {50, 0}};
  const auto in = infringement_distances(footprint_rectangle({0, 0, 0}, kCar), lane, 3.5, 2.0);
  EXPECT_EQ(in.left, 0.0);
  EXPECT_EQ(in.right, 0.0);
  // Left edge at 0.9 + y; put it 0.3 m past the boundary at 1.75.
  const auto out = infringement_distances(footprint_rectangle({0, 1.15, 0}, kCar), lane, 3.5, 2.0);
  EXPECT_NEAR(out.left, 0.3, 1e-12);
  EXPECT_EQ(out.right, 0.0);
  const auto far = infringement_distances(footprint_rectangle({0, 40, 0}, kCar), lane, 3.5, 2.0);
  EXPECT_EQ(far.left, 2.0);
  EXPECT_LE(far.left + far.right, 4.0);
}
