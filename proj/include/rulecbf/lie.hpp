#pragma once

#include <array>
#include <stdexcept>

#include "rulecbf/field.hpp"

namespace rulecbf {

namespace detail {

// L_f^K h at x, by pushing x along f one dual level per derivative:
// L_f h(x) = d/de h(x + e f(x)) at e = 0.
template <int K, class S>
S lie_f(const ScalarField& h, const DriftModel& f, const AugState<S>& x) {
  if constexpr (K == 0) {
    return h.eval(x);
  } else {
    const AugState<S> fx = f(x);
    AugState<Dual<S>> y;
    for (int i = 0; i < kAugDim; ++i) y[i] = Dual<S>(x[i], fx[i]);
    return lie_f<K - 1, Dual<S>>(h, f, y).d;
  }
}

template <int K>
std::array<double, 2> lie_g_lie_f(const ScalarField& h, const DriftModel& f, const AugState<double>& x) {
  std::array<double, 2> out{};
  for (int c = 0; c < 2; ++c) {
    AugState<D1> y;
    for (int i = 0; i < kAugDim; ++i) y[i] = D1(x[i], i == kControlState[c] ? 1.0 : 0.0);
    out[c] = lie_f<K, D1>(h, f, y).d;
  }
  return out;
}

}  // namespace detail

/// L_f^k h(x) for k in [0, 4].
inline double lie_f(const ScalarField& h, const DriftModel& f, const AugState<double>& x, int k) {
  switch (k) {
    case 0: return detail::lie_f<0, double>(h, f, x);
    case 1: return detail::lie_f<1, double>(h, f, x);
    case 2: return detail::lie_f<2, double>(h, f, x);
    case 3: return detail::lie_f<3, double>(h, f, x);
    case 4: return detail::lie_f<4, double>(h, f, x);
    default: throw std::invalid_argument("lie_f: order must be in [0, 4]");
  }
}

/// (L_g L_f^k h)(x) as (jerk, steer) coefficients, k in [0, 3].
inline std::array<double, 2> lie_g(const ScalarField& h, const DriftModel& f, const AugState<double>& x, int k) {
  switch (k) {
    case 0: return detail::lie_g_lie_f<0>(h, f, x);
    case 1: return detail::lie_g_lie_f<1>(h, f, x);
    case 2: return detail::lie_g_lie_f<2>(h, f, x);
    case 3: return detail::lie_g_lie_f<3>(h, f, x);
    default: throw std::invalid_argument("lie_g: order must be in [0, 3]");
  }
}

}  // namespace rulecbf
