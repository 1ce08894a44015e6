#include <immintrin.h>

#include <cstdint>

#include "rulecbf/kernels.hpp"

namespace rulecbf::kernels::avx2 {

#define RULECBF_AVX2 __attribute__((target("avx2")))

RULECBF_AVX2 std::size_t argmin_sq_dist(const double* xy, std::size_t n, double px, double py) {
  // Two points per register; hadd of two squared registers yields the
  // distances of points {k, k+2, k+1, k+3}.
  const __m256d p = _mm256_setr_pd(px, py, px, py);
  __m256d best = _mm256_set1_pd(__builtin_inf());
  __m256d best_idx = _mm256_set1_pd(-1.0);
  const __m256d lane_off = _mm256_setr_pd(0.0, 2.0, 1.0, 3.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(xy + 2 * i), p);
    const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(xy + 2 * i + 4), p);
    const __m256d d = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    const __m256d lt = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
    const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), lane_off);
    best = _mm256_blendv_pd(best, d, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
  }
  alignas(32) double bv[4];
  alignas(32) double bi[4];
  _mm256_store_pd(bv, best);
  _mm256_store_pd(bi, best_idx);
  double best_d = __builtin_inf();
  std::int64_t best_i = -1;
  for (int l = 0; l < 4; ++l) {
    if (bi[l] < 0.0) continue;
    const auto li = static_cast<std::int64_t>(bi[l]);
    if (bv[l] < best_d || (bv[l] == best_d && li < best_i)) {
      best_d = bv[l];
      best_i = li;
    }
  }
  for (; i < n; ++i) {
    const double dx = xy[2 * i] - px;
    const double dy = xy[2 * i + 1] - py;
    const double dx2 = dx * dx;
    const double dy2 = dy * dy;
    const double d = dx2 + dy2;
    if (best_i < 0 || d < best_d) {
      best_d = d;
      best_i = static_cast<std::int64_t>(i);
    }
  }
  return static_cast<std::size_t>(best_i);
}

RULECBF_AVX2 std::size_t count_uncovered(const double* sx, const double* sy, std::size_t ns, const double* cx,
                                         const double* cy, std::size_t nc, double r2) {
  const __m256d rr = _mm256_set1_pd(r2);
  std::size_t missed = 0;
  std::size_t i = 0;
  for (; i + 4 <= ns; i += 4) {
    const __m256d x = _mm256_loadu_pd(sx + i);
    const __m256d y = _mm256_loadu_pd(sy + i);
    __m256d hit = _mm256_setzero_pd();
    for (std::size_t j = 0; j < nc; ++j) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(cx[j]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(cy[j]));
      const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      hit = _mm256_or_pd(hit, _mm256_cmp_pd(d, rr, _CMP_LE_OQ));
    }
    missed += 4 - static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(hit)));
  }
  if (i < ns) missed += scalar::count_uncovered(sx + i, sy + i, ns - i, cx, cy, nc, r2);
  return missed;
}

#undef RULECBF_AVX2

}  // namespace rulecbf::kernels::avx2
