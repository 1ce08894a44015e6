#pragma once

#include <memory>
#include <utility>

#include "rulecbf/dual.hpp"
#include "rulecbf/vehicle.hpp"

namespace rulecbf {

/// Smooth scalar function of the augmented state, evaluable at every dual
/// nesting depth the Lie-derivative recursion needs.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double eval(const AugState<double>& x) const = 0;
  virtual D1 eval(const AugState<D1>& x) const = 0;
  virtual D2 eval(const AugState<D2>& x) const = 0;
  virtual D3 eval(const AugState<D3>& x) const = 0;
  virtual D4 eval(const AugState<D4>& x) const = 0;
  virtual D5 eval(const AugState<D5>& x) const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

template <class F>
class GenericField final : public ScalarField {
 public:
  explicit GenericField(F fn) : fn_(std::move(fn)) {}
  double eval(const AugState<double>& x) const override { return fn_(x); }
  D1 eval(const AugState<D1>& x) const override { return fn_(x); }
  D2 eval(const AugState<D2>& x) const override { return fn_(x); }
  D3 eval(const AugState<D3>& x) const override { return fn_(x); }
  D4 eval(const AugState<D4>& x) const override { return fn_(x); }
  D5 eval(const AugState<D5>& x) const override { return fn_(x); }

 private:
  F fn_;
};

/// Wraps a generic lambda `[](const auto& x) { ... }` returning the element type.
template <class F>
FieldPtr make_field(F fn) {
  return std::make_shared<const GenericField<F>>(std::move(fn));
}

/// Control-free vector field of the augmented system with curvature frozen.
struct DriftModel {
  double kappa = 0.0;
  VehicleGeometry geometry{};

  template <class S>
  AugState<S> operator()(const AugState<S>& x) const {
    return drift(x, kappa, geometry);
  }
};

// Control directions: u_jerk drives a, u_steer drives omega.
inline constexpr int kControlState[2] = {kA, kOmega};

}  // namespace rulecbf
