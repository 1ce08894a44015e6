#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<...>> gives exact higher-order
// directional derivatives; each nesting level carries its own infinitesimal so
// perturbations at different levels never mix.

#include <cmath>
#include <type_traits>

namespace rulecbf {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative along this level's direction

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
  }

  friend Dual operator+(const Dual& a, double c) { return {a.v + c, a.d}; }
  friend Dual operator+(double c, const Dual& a) { return {a.v + c, a.d}; }
  friend Dual operator-(const Dual& a, double c) { return {a.v - c, a.d}; }
  friend Dual operator-(double c, const Dual& a) { return {c - a.v, -a.d}; }
  friend Dual operator*(const Dual& a, double c) { return {a.v * c, a.d * c}; }
  friend Dual operator*(double c, const Dual& a) { return {a.v * c, a.d * c}; }
  friend Dual operator/(const Dual& a, double c) { return {a.v / c, a.d / c}; }
  friend Dual operator/(double c, const Dual& a) { return Dual(c) / a; }
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

/// Innermost double of a (possibly nested) dual.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.v), cos(x.v) * x.d};
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.v), -(sin(x.v) * x.d)};
}

template <class T>
Dual<T> tan(const Dual<T>& x) {
  using std::tan;
  T t = tan(x.v);
  return {t, (T(1.0) + t * t) * x.d};
}

template <class T>
Dual<T> atan(const Dual<T>& x) {
  using std::atan;
  return {atan(x.v), x.d / (T(1.0) + x.v * x.v)};
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T r = sqrt(x.v);
  return {r, x.d / (2.0 * r)};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  return {e, e * x.d};
}

// Dual<double> nested up to five levels deep; the Lie-derivative machinery
// never needs more than that for relative degree <= 4.
using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;
using D5 = Dual<D4>;

}  // namespace rulecbf
