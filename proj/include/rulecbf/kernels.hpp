#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
// The dispatched entry points pick the widest implementation the CPU supports;
// both variants produce bit-identical results (same operation order, no FMA).

#include <cstddef>

namespace rulecbf::kernels {

enum class Isa { kScalar, kAvx2 };

Isa detected_isa();
Isa active_isa();
// Testing hook; requesting AVX2 on a CPU without it falls back to scalar.
void force_isa(Isa isa);
void reset_isa();

/// Index of the point nearest (px, py) in an interleaved xy array of n points.
/// Ties resolve to the smallest index. n must be > 0.
std::size_t argmin_sq_dist(const double* xy, std::size_t n, double px, double py);

/// Number of samples (SoA arrays sx, sy) that lie farther than sqrt(r2) from
/// every center (SoA arrays cx, cy).
std::size_t count_uncovered(const double* sx, const double* sy, std::size_t ns, const double* cx,
                            const double* cy, std::size_t nc, double r2);

namespace scalar {
std::size_t argmin_sq_dist(const double* xy, std::size_t n, double px, double py);
std::size_t count_uncovered(const double* sx, const double* sy, std::size_t ns, const double* cx,
                            const double* cy, std::size_t nc, double r2);
}  // namespace scalar

namespace avx2 {
std::size_t argmin_sq_dist(const double* xy, std::size_t n, double px, double py);
std::size_t count_uncovered(const double* sx, const double* sy, std::size_t ns, const double* cx,
                            const double* cy, std::size_t nc, double r2);
}  // namespace avx2

}  // namespace rulecbf::kernels
