#include "rulecbf/kernels.hpp"

namespace rulecbf::kernels::scalar {

std::size_t argmin_sq_dist(const double* xy, std::size_t n, double px, double py) {
  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xy[2 * i] - px;
    const double dy = xy[2 * i + 1] - py;
    const double dx2 = dx * dx;
    const double dy2 = dy * dy;
    const double d = dx2 + dy2;
    if (i == 0 || d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::size_t count_uncovered(const double* sx, const double* sy, std::size_t ns, const double* cx,
                            const double* cy, std::size_t nc, double r2) {
  std::size_t missed = 0;
  for (std::size_t i = 0; i < ns; ++i) {
    bool hit = false;
    for (std::size_t j = 0; j < nc; ++j) {
      const double dx = sx[i] - cx[j];
      const double dy = sy[i] - cy[j];
      const double dx2 = dx * dx;
      const double dy2 = dy * dy;
      if (dx2 + dy2 <= r2) {
        hit = true;
        break;
      }
    }
    if (!hit) ++missed;
  }
  return missed;
}

}  // namespace rulecbf::kernels::scalar
