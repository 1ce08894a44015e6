#pragma once

#include <array>
#include <span>
#include <vector>

#include "rulecbf/path.hpp"
#include "rulecbf/vehicle.hpp"

namespace rulecbf {

struct Footprint {
  double length = 4.0;
  double width = 1.8;
};

/// Clearance pads added to each side of a footprint.
struct ClearancePads {
  double front = 0.0, back = 0.0, left = 0.0, right = 0.0;
};

/// Per-side pad range, used when choosing the disk count.
struct PadInterval {
  double lo = 0.0, hi = 0.0;
};
struct PadRanges {
  PadInterval front, back, left, right;
  static PadRanges fixed(const ClearancePads& p) {
    return {{p.front, p.front}, {p.back, p.back}, {p.left, p.left}, {p.right, p.right}};
  }
  ClearancePads upper() const { return {front.hi, back.hi, left.hi, right.hi}; }
};

struct DiskCover {
  int count = 1;
  double radius = 0.0;  // radius at the upper end of the pad ranges
};

/// Smallest radius for which z equal disks along the centerline cover the
/// padded rectangle.
double min_radius(const Footprint& fp, const ClearancePads& pads, int z);

/// Lateral over-coverage: radius minus half the padded width.
double lateral_error(const Footprint& fp, const ClearancePads& pads, int z);

/// Signed offsets of the disk centers along the heading, measured from the
/// footprint center.
std::vector<double> disk_offsets(const Footprint& fp, const ClearancePads& pads, int z);

std::vector<Vec2> disk_centers(const GlobalPose& pose, const Footprint& fp, const ClearancePads& pads, int z);

struct CoverCost {
  int z = 0;
  double radius = 0.0;
  double sigma_integral = 0.0;
  double cost = 0.0;
};

/// Minimizes z + beta * integral of the lateral over-coverage over the pad
/// ranges (5-node Gauss-Legendre on each non-degenerate axis). Ties go to the
/// smaller z. The optional table receives every evaluated candidate.
DiskCover optimize_cover(const Footprint& fp, const PadRanges& ranges, double beta, int z_max,
                         std::vector<CoverCost>* table = nullptr);

struct OrientedRectangle {
  Vec2 center = Vec2::Zero();
  double heading = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;

  // Counter-clockwise starting at the front-left corner.
  std::array<Vec2, 4> corners() const;
  Vec2 axis_long() const { return {std::cos(heading), std::sin(heading)}; }
  Vec2 axis_lat() const { return {-std::sin(heading), std::cos(heading)}; }
};

OrientedRectangle footprint_rectangle(const GlobalPose& pose, const Footprint& fp);
OrientedRectangle padded_rectangle(const GlobalPose& pose, const Footprint& fp, const ClearancePads& pads);

/// Grid-samples the rectangle (about n_samples points including its boundary)
/// and checks every sample lies within `radius` of some center.
bool coverage_check(std::span<const Vec2> centers, double radius, const OrientedRectangle& rect, int n_samples);

/// Minimum Euclidean distance between two rectangles, or minus the
/// penetration depth (smallest separating-axis overlap) when they intersect.
double rect_rect_distance(const OrientedRectangle& a, const OrientedRectangle& b);

/// Distance from a rectangle to a disk (negative when overlapping).
double rect_disk_distance(const OrientedRectangle& r, const Vec2& center, double radius);

inline constexpr double kNoNeighbour = 1e6;

/// Gaps from the ego footprint to another footprint in the ego body frame.
/// Sides with nothing in the corresponding band report kNoNeighbour.
struct DirectionalDistances {
  double left = kNoNeighbour;
  double right = kNoNeighbour;
  double front = kNoNeighbour;
};
DirectionalDistances directional_distances(const OrientedRectangle& ego, const OrientedRectangle& other);

/// How far the ego footprint reaches past the left/right edges of a corridor
/// of the given width around a centerline, each clipped to [0, d_max].
struct Infringement {
  double left = 0.0;
  double right = 0.0;
};
Infringement infringement_distances(const OrientedRectangle& ego, std::span<const Vec2> centerline, double width,
                                    double d_max);

}  // namespace rulecbf
