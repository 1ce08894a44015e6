#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rulecbf/vehicle.hpp"

namespace rulecbf {

using Vec2 = Eigen::Vector2d;

/// Discretized reference curve with per-point tangent angle, signed curvature
/// and cumulative arc length.
struct ReferencePath {
  std::vector<Vec2> points;
  std::vector<double> tangent;
  std::vector<double> curvature;
  std::vector<double> arclength;
  double gamma = 0.1;  // advance threshold for the reference index (m)

  std::size_t size() const { return points.size(); }

  // Resamples the polyline at uniform spacing `resolution` and estimates
  // geometry. `smooth` applies a 3-tap moving average to the curvature.
  static ReferencePath from_polyline(std::span<const Vec2> polyline, double resolution, double gamma,
                                     bool smooth = true);
  // Uses the given points as-is (no resampling).
  static ReferencePath from_points(std::vector<Vec2> points, double gamma, bool smooth = false);
};

struct PathGeometry {
  std::vector<double> tangent;
  std::vector<double> curvature;
  std::vector<double> arclength;
};

/// Tangent via central differences (one-sided at the ends), curvature from the
/// circumscribed circle through consecutive triples (zero when collinear).
PathGeometry estimate_path_geometry(std::span<const Vec2> points, bool smooth = false);

std::vector<Vec2> resample_polyline(std::span<const Vec2> polyline, double resolution);

/// Global nearest point; ties go to the smallest index.
std::size_t nearest_index(const ReferencePath& path, const Vec2& p);

/// Advance to i+1 if within gamma of p_i, otherwise re-snap globally.
std::size_t update_reference_index(const Vec2& p, const ReferencePath& path, std::size_t i_prev);

struct FrenetCoords {
  double s = 0.0;
  double d = 0.0;
  double mu = 0.0;
};

// The path near p_i is modelled as the osculating arc through p_i with
// heading tangent[i] and curvature curvature[i]. Local coordinates (xi, eta)
// are along the tangent and the left normal at p_i.
template <class S>
std::pair<S, S> arc_to_local(double kappa, const S& ds, const S& d) {
  using std::cos;
  using std::sin;
  if (kappa == 0.0) return {ds, d};
  const S a = kappa * ds;
  const S sh = sin(0.5 * a);
  return {sin(a) / kappa - d * sin(a), 2.0 * sh * sh / kappa + d * cos(a)};
}

// Inverse of arc_to_local; valid while 1 - kappa*d > 0. Written without the
// 1/kappa centre so it stays accurate as kappa -> 0.
template <class S>
std::pair<S, S> local_to_arc(double kappa, const S& xi, const S& eta) {
  using std::atan;
  using std::sqrt;
  if (kappa == 0.0) return {xi, eta};
  const S e = -2.0 * kappa * eta + kappa * kappa * (xi * xi + eta * eta);
  const S d = (2.0 * eta - kappa * (xi * xi + eta * eta)) / (1.0 + sqrt(1.0 + e));
  // atan2(kappa*xi, 1 - kappa*eta) with 1 - kappa*eta > 0 near the path.
  const S c = 1.0 - kappa * eta;
  const S ang = 2.0 * atan((kappa * xi) / (sqrt(c * c + kappa * kappa * xi * xi) + c));
  return {ang / kappa, d};
}

/// Frenet -> inertial pose using the arc model around reference point i.
GlobalPose frenet_to_global(const FrenetCoords& f, const ReferencePath& path, std::size_t i);

/// Inertial -> Frenet pose around reference point i (exact inverse of the above).
FrenetCoords global_to_frenet(const GlobalPose& pose, const ReferencePath& path, std::size_t i);

/// Orthogonal projection onto a polyline: arclength, signed lateral offset
/// (positive left of the direction of travel) and the segment index.
struct PolylineProjection {
  double s = 0.0;
  double lateral = 0.0;
  std::size_t segment = 0;
  double tangent = 0.0;
};
PolylineProjection project_onto_polyline(std::span<const Vec2> polyline, const Vec2& p);

}  // namespace rulecbf
