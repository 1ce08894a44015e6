#include "rulecbf/path.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "rulecbf/kernels.hpp"

namespace rulecbf {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed curvature of the circle through three points (left turn positive).
double circumcurvature(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double ab = (b - a).norm();
  const double bc = (c - b).norm();
  const double ca = (a - c).norm();
  const double denom = ab * bc * ca;
  if (denom <= 0.0) return 0.0;
  const double area2 = cross(b - a, c - a);
  if (std::abs(area2) <= 1e-12 * denom) return 0.0;
  return 2.0 * area2 / denom;
}

}  // namespace

std::vector<Vec2> resample_polyline(std::span<const Vec2> polyline, double resolution) {
  if (polyline.size() < 2) throw std::invalid_argument("polyline needs at least two points");
  if (!(resolution > 0.0)) throw std::invalid_argument("resample resolution must be positive");
  std::vector<double> cum(polyline.size(), 0.0);
  for (std::size_t i = 1; i < polyline.size(); ++i) cum[i] = cum[i - 1] + (polyline[i] - polyline[i - 1]).norm();
  const double total = cum.back();
  if (!(total > 0.0)) throw std::invalid_argument("polyline has zero length");
  const auto n = static_cast<std::size_t>(std::max(1.0, std::round(total / resolution)));
  std::vector<Vec2> out;
  out.reserve(n + 1);
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n);
    while (seg + 2 < polyline.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    out.push_back(polyline[seg] + t * (polyline[seg + 1] - polyline[seg]));
  }
  return out;
}

PathGeometry estimate_path_geometry(std::span<const Vec2> pts, bool smooth) {
  const std::size_t n = pts.size();
  if (n < 2) throw std::invalid_argument("path needs at least two points");
  PathGeometry g;
  g.tangent.resize(n);
  g.curvature.assign(n, 0.0);
  g.arclength.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) g.arclength[i] = g.arclength[i - 1] + (pts[i] - pts[i - 1]).norm();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 dir = (i == 0) ? (pts[1] - pts[0]) : (i + 1 == n) ? (pts[n - 1] - pts[n - 2]) : (pts[i + 1] - pts[i - 1]);
    g.tangent[i] = std::atan2(dir.y(), dir.x());
  }
  for (std::size_t i = 1; i + 1 < n; ++i) g.curvature[i] = circumcurvature(pts[i - 1], pts[i], pts[i + 1]);
  if (n >= 3) {
    g.curvature[0] = g.curvature[1];
    g.curvature[n - 1] = g.curvature[n - 2];
  }
  if (smooth && n >= 3) {
    std::vector<double> k = g.curvature;
    for (std::size_t i = 1; i + 1 < n; ++i) k[i] = (g.curvature[i - 1] + g.curvature[i] + g.curvature[i + 1]) / 3.0;
    g.curvature = std::move(k);
  }
  return g;
}

ReferencePath ReferencePath::from_points(std::vector<Vec2> points, double gamma, bool smooth) {
  if (!(gamma > 0.0)) throw std::invalid_argument("reference path gamma must be positive");
  ReferencePath p;
  PathGeometry g = estimate_path_geometry(points, smooth);
  p.points = std::move(points);
  p.tangent = std::move(g.tangent);
  p.curvature = std::move(g.curvature);
  p.arclength = std::move(g.arclength);
  p.gamma = gamma;
  return p;
}

ReferencePath ReferencePath::from_polyline(std::span<const Vec2> polyline, double resolution, double gamma,
                                           bool smooth) {
  return from_points(resample_polyline(polyline, resolution), gamma, smooth);
}

std::size_t nearest_index(const ReferencePath& path, const Vec2& p) {
  if (path.points.empty()) throw std::invalid_argument("nearest_index on empty path");
  static_assert(sizeof(Vec2) == 2 * sizeof(double));
  return kernels::argmin_sq_dist(path.points.front().data(), path.points.size(), p.x(), p.y());
}

std::size_t update_reference_index(const Vec2& p, const ReferencePath& path, std::size_t i_prev) {
  if (path.points.empty()) throw std::invalid_argument("update_reference_index on empty path");
  i_prev = std::min(i_prev, path.size() - 1);
  if ((p - path.points[i_prev]).norm() <= path.gamma) return std::min(i_prev + 1, path.size() - 1);
  return nearest_index(path, p);
}

GlobalPose frenet_to_global(const FrenetCoords& f, const ReferencePath& path, std::size_t i) {
  const double kappa = path.curvature.at(i);
  const double phi = path.tangent[i];
  const double ds = f.s - path.arclength[i];
  const auto [xi, eta] = arc_to_local(kappa, ds, f.d);
  const double c = std::cos(phi), s = std::sin(phi);
  const Vec2& p = path.points[i];
  return {p.x() + c * xi - s * eta, p.y() + s * xi + c * eta, wrap_angle(phi + kappa * ds + f.mu)};
}

FrenetCoords global_to_frenet(const GlobalPose& pose, const ReferencePath& path, std::size_t i) {
  const double kappa = path.curvature.at(i);
  const double phi = path.tangent[i];
  const Vec2 q = Vec2(pose.x, pose.y) - path.points[i];
  const double c = std::cos(phi), s = std::sin(phi);
  const double xi = c * q.x() + s * q.y();
  const double eta = -s * q.x() + c * q.y();
  if (1.0 - kappa * eta <= kSingularityGuard && kappa != 0.0) {
    throw SingularityError("point lies at or beyond the reference arc's centre of curvature");
  }
  const auto [ds, d] = local_to_arc(kappa, xi, eta);
  return {path.arclength[i] + ds, d, wrap_angle(pose.theta - phi - kappa * ds)};
}

PolylineProjection project_onto_polyline(std::span<const Vec2> poly, const Vec2& p) {
  if (poly.size() < 2) throw std::invalid_argument("projection needs a polyline with >= 2 points");
  PolylineProjection best;
  double best_d2 = std::numeric_limits<double>::infinity();
  double s0 = 0.0;
  for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
    const Vec2 e = poly[k + 1] - poly[k];
    const double len2 = e.squaredNorm();
    const double len = std::sqrt(len2);
    double t = len2 > 0.0 ? (p - poly[k]).dot(e) / len2 : 0.0;
    // Extend the first and last segments so points beyond the ends still get
    // a meaningful lateral offset.
    const double lo = (k == 0) ? -std::numeric_limits<double>::infinity() : 0.0;
    const double hi = (k + 2 == poly.size()) ? std::numeric_limits<double>::infinity() : 1.0;
    t = std::clamp(t, lo, hi);
    const Vec2 foot = poly[k] + t * e;
    const double d2 = (p - foot).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best.segment = k;
      best.s = s0 + t * len;
      best.tangent = std::atan2(e.y(), e.x());
      const double side = len > 0.0 ? cross(e, p - poly[k]) / len : 0.0;
      best.lateral = (side >= 0.0 ? 1.0 : -1.0) * std::sqrt(d2);
    }
    s0 += len;
  }
  return best;
}

}  // namespace rulecbf
