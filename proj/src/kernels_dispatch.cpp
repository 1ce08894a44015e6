#include <atomic>

#include "rulecbf/kernels.hpp"

namespace rulecbf::kernels {

namespace {

std::atomic<int> g_forced{-1};

}  // namespace

Isa detected_isa() {
  static const Isa isa = __builtin_cpu_supports("avx2") ? Isa::kAvx2 : Isa::kScalar;
  return isa;
}

Isa active_isa() {
  const int f = g_forced.load(std::memory_order_relaxed);
  if (f < 0) return detected_isa();
  const auto want = static_cast<Isa>(f);
  return (want == Isa::kAvx2 && detected_isa() != Isa::kAvx2) ? Isa::kScalar : want;
}

void force_isa(Isa isa) { g_forced.store(static_cast<int>(isa), std::memory_order_relaxed); }
void reset_isa() { g_forced.store(-1, std::memory_order_relaxed); }

std::size_t argmin_sq_dist(const double* xy, std::size_t n, double px, double py) {
  return active_isa() == Isa::kAvx2 ? avx2::argmin_sq_dist(xy, n, px, py) : scalar::argmin_sq_dist(xy, n, px, py);
}

std::size_t count_uncovered(const double* sx, const double* sy, std::size_t ns, const double* cx,
                            const double* cy, std::size_t nc, double r2) {
  return active_isa() == Isa::kAvx2 ? avx2::count_uncovered(sx, sy, ns, cx, cy, nc, r2)
                                    : scalar::count_uncovered(sx, sy, ns, cx, cy, nc, r2);
}

}  // namespace rulecbf::kernels
