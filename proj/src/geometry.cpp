#include "rulecbf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "rulecbf/kernels.hpp"

namespace rulecbf {

namespace {

void check_cover_args(const Footprint& fp, int z) {
  if (z < 1) throw std::invalid_argument("disk count must be >= 1");
  if (!(fp.length > 0.0) || !(fp.width > 0.0)) throw std::invalid_argument("footprint must have positive size");
}

double padded_length(const Footprint& fp, const ClearancePads& p) { return fp.length + p.front + p.back; }
double padded_width(const Footprint& fp, const ClearancePads& p) { return fp.width + p.left + p.right; }

}  // namespace

double min_radius(const Footprint& fp, const ClearancePads& pads, int z) {
  check_cover_args(fp, z);
  const double hw = padded_width(fp, pads) / 2.0;
  const double hl = padded_length(fp, pads) / (2.0 * z);
  return std::sqrt(hw * hw + hl * hl);
}

double lateral_error(const Footprint& fp, const ClearancePads& pads, int z) {
  return min_radius(fp, pads, z) - padded_width(fp, pads) / 2.0;
}

std::vector<double> disk_offsets(const Footprint& fp, const ClearancePads& pads, int z) {
  check_cover_args(fp, z);
  const double seg = padded_length(fp, pads) / (2.0 * z);
  std::vector<double> off(static_cast<std::size_t>(z));
  for (int j = 1; j <= z; ++j) off[j - 1] = -fp.length / 2.0 - pads.back + seg * (2.0 * j - 1.0);
  return off;
}

std::vector<Vec2> disk_centers(const GlobalPose& pose, const Footprint& fp, const ClearancePads& pads, int z) {
  // Lateral pads shift the padded rectangle sideways; the centerline of the
  // cover follows it.
  const double lat = (pads.left - pads.right) / 2.0;
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  std::vector<Vec2> out;
  for (double o : disk_offsets(fp, pads, z)) out.emplace_back(pose.x + c * o - s * lat, pose.y + s * o + c * lat);
  return out;
}

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                         0.9061798459386640};
constexpr std::array<double, 5> kGlWeights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

double integrate_sigma(const Footprint& fp, const PadRanges& r, int z) {
  const std::array<PadInterval, 4> axes{r.front, r.back, r.left, r.right};
  std::function<double(int, std::array<double, 4>&)> rec = [&](int k, std::array<double, 4>& h) -> double {
    if (k == 4) return lateral_error(fp, {h[0], h[1], h[2], h[3]}, z);
    const PadInterval& iv = axes[k];
    if (iv.hi < iv.lo) throw std::invalid_argument("pad range has hi < lo");
    if (iv.hi == iv.lo) {
      h[k] = iv.lo;
      return rec(k + 1, h);
    }
    const double mid = 0.5 * (iv.lo + iv.hi), half = 0.5 * (iv.hi - iv.lo);
    double acc = 0.0;
    for (int q = 0; q < 5; ++q) {
      h[k] = mid + half * kGlNodes[q];
      acc += half * kGlWeights[q] * rec(k + 1, h);
    }
    return acc;
  };
  std::array<double, 4> h{};
  return rec(0, h);
}

}  // namespace

DiskCover optimize_cover(const Footprint& fp, const PadRanges& ranges, double beta, int z_max,
                         std::vector<CoverCost>* table) {
  if (z_max < 1) throw std::invalid_argument("z_max must be >= 1");
  if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
  DiskCover best;
  double best_cost = std::numeric_limits<double>::infinity();
  if (table) table->clear();
  for (int z = 1; z <= z_max; ++z) {
    const double integral = integrate_sigma(fp, ranges, z);
    const double cost = z + beta * integral;
    const double radius = min_radius(fp, ranges.upper(), z);
    if (table) table->push_back({z, radius, integral, cost});
    if (cost < best_cost) {
      best_cost = cost;
      best = {z, radius};
    }
  }
  return best;
}

std::array<Vec2, 4> OrientedRectangle::corners() const {
  const Vec2 u = axis_long() * half_length;
  const Vec2 n = axis_lat() * half_width;
  return {center + u + n, center - u + n, center - u - n, center + u - n};
}

OrientedRectangle footprint_rectangle(const GlobalPose& pose, const Footprint& fp) {
  return {Vec2(pose.x, pose.y), pose.theta, fp.length / 2.0, fp.width / 2.0};
}

OrientedRectangle padded_rectangle(const GlobalPose& pose, const Footprint& fp, const ClearancePads& pads) {
  const double lon = (pads.front - pads.back) / 2.0;
  const double lat = (pads.left - pads.right) / 2.0;
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  return {Vec2(pose.x + c * lon - s * lat, pose.y + s * lon + c * lat), pose.theta, padded_length(fp, pads) / 2.0,
          padded_width(fp, pads) / 2.0};
}

bool coverage_check(std::span<const Vec2> centers, double radius, const OrientedRectangle& rect, int n_samples) {
  if (centers.empty()) return false;
  const int per_axis = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_samples)))));
  std::vector<double> sx, sy, cx, cy;
  sx.reserve(per_axis * per_axis);
  sy.reserve(per_axis * per_axis);
  const Vec2 u = rect.axis_long(), n = rect.axis_lat();
  for (int i = 0; i < per_axis; ++i) {
    const double a = -rect.half_length + 2.0 * rect.half_length * i / (per_axis - 1);
    for (int j = 0; j < per_axis; ++j) {
      const double b = -rect.half_width + 2.0 * rect.half_width * j / (per_axis - 1);
      const Vec2 p = rect.center + a * u + b * n;
      sx.push_back(p.x());
      sy.push_back(p.y());
    }
  }
  for (const Vec2& c : centers) {
    cx.push_back(c.x());
    cy.push_back(c.y());
  }
  // A hair of slack for samples that sit exactly on the cover boundary.
  const double r2 = radius * radius * (1.0 + 1e-12) + 1e-12;
  return kernels::count_uncovered(sx.data(), sy.data(), sx.size(), cx.data(), cy.data(), cx.size(), r2) == 0;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(e) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * e)).norm();
}

double rect_point_distance(const OrientedRectangle& r, const Vec2& p) {
  const Vec2 q = p - r.center;
  const double dx = std::max(0.0, std::abs(q.dot(r.axis_long())) - r.half_length);
  const double dy = std::max(0.0, std::abs(q.dot(r.axis_lat())) - r.half_width);
  return std::hypot(dx, dy);
}

}  // namespace

double rect_rect_distance(const OrientedRectangle& a, const OrientedRectangle& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes{a.axis_long(), a.axis_lat(), b.axis_long(), b.axis_lat()};
  double max_gap = -std::numeric_limits<double>::infinity();
  for (const Vec2& ax : axes) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin, bmin = amin, bmax = -amin;
    for (const Vec2& p : ca) {
      amin = std::min(amin, p.dot(ax));
      amax = std::max(amax, p.dot(ax));
    }
    for (const Vec2& p : cb) {
      bmin = std::min(bmin, p.dot(ax));
      bmax = std::max(bmax, p.dot(ax));
    }
    max_gap = std::max(max_gap, std::max(bmin - amax, amin - bmax));
  }
  if (max_gap <= 0.0) return max_gap;
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      d = std::min(d, point_segment_distance(ca[i], cb[j], cb[(j + 1) % 4]));
      d = std::min(d, point_segment_distance(cb[i], ca[j], ca[(j + 1) % 4]));
    }
  }
  return d;
}

double rect_disk_distance(const OrientedRectangle& r, const Vec2& center, double radius) {
  const Vec2 q = center - r.center;
  const double x = q.dot(r.axis_long()), y = q.dot(r.axis_lat());
  const double dx = std::abs(x) - r.half_length, dy = std::abs(y) - r.half_width;
  if (dx <= 0.0 && dy <= 0.0) return std::max(dx, dy) - radius;  // center inside
  return rect_point_distance(r, center) - radius;
}

namespace {

using Poly = std::vector<Vec2>;

// Clips a convex polygon to {p : dot(n, p) <= c}.
Poly clip_half_plane(const Poly& in, const Vec2& n, double c) {
  Poly out;
  const std::size_t m = in.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& p = in[i];
    const Vec2& q = in[(i + 1) % m];
    const double fp = n.dot(p) - c, fq = n.dot(q) - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) out.push_back(p + (fp / (fp - fq)) * (q - p));
  }
  return out;
}

}  // namespace

DirectionalDistances directional_distances(const OrientedRectangle& ego, const OrientedRectangle& other) {
  // Other's corners in the ego body frame (x forward, y left).
  Poly body;
  for (const Vec2& p : other.corners()) {
    const Vec2 q = p - ego.center;
    body.emplace_back(q.dot(ego.axis_long()), q.dot(ego.axis_lat()));
  }
  const double L = ego.half_length, W = ego.half_width;
  DirectionalDistances out;

  // Front: portion inside the ego's lateral band.
  Poly band = clip_half_plane(clip_half_plane(body, Vec2(0, 1), W), Vec2(0, -1), W);
  if (!band.empty()) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    for (const Vec2& p : band) {
      xmin = std::min(xmin, p.x());
      xmax = std::max(xmax, p.x());
    }
    if (xmax > L) out.front = xmin - L;
  }
  // Left/right: portion inside the ego's longitudinal band.
  Poly side = clip_half_plane(clip_half_plane(body, Vec2(1, 0), L), Vec2(-1, 0), L);
  if (!side.empty()) {
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const Vec2& p : side) {
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
    if (ymax > W) out.left = ymin - W;
    if (ymin < -W) out.right = -W - ymax;
  }
  return out;
}

Infringement infringement_distances(const OrientedRectangle& ego, std::span<const Vec2> centerline, double width,
                                    double d_max) {
  Infringement out;
  for (const Vec2& p : ego.corners()) {
    const double lat = project_onto_polyline(centerline, p).lateral;
    out.left = std::max(out.left, lat - width / 2.0);
    out.right = std::max(out.right, -lat - width / 2.0);
  }
  out.left = std::clamp(out.left, 0.0, d_max);
  out.right = std::clamp(out.right, 0.0, d_max);
  return out;
}

}  // namespace rulecbf
