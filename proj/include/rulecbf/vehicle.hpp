#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rulecbf/dual.hpp"

namespace rulecbf {

// Frenet-frame state layout. Index 7 is an auxiliary clock (time since the
// current step began) so barrier fields can extrapolate moving obstacles;
// its drift is identically 1 and no control acts on it.
enum StateIndex : int { kS = 0, kD, kMu, kV, kA, kDelta, kOmega, kTau };
inline constexpr int kStateDim = 7;
inline constexpr int kAugDim = 8;

template <class S>
using AugState = std::array<S, kAugDim>;

inline constexpr double kSingularityGuard = 1e-6;

class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

struct VehicleState {
  double s = 0.0;      // along-path progress (m)
  double d = 0.0;      // lateral offset, positive left (m)
  double mu = 0.0;     // heading error w.r.t. the path tangent (rad)
  double v = 0.0;      // speed (m/s)
  double a = 0.0;      // acceleration (m/s^2)
  double delta = 0.0;  // steering angle (rad)
  double omega = 0.0;  // steering rate (rad/s)

  std::array<double, kStateDim> to_array() const { return {s, d, mu, v, a, delta, omega}; }
  static VehicleState from_array(const std::array<double, kStateDim>& x) {
    return {x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
  }
  AugState<double> augmented(double tau = 0.0) const { return {s, d, mu, v, a, delta, omega, tau}; }
};

struct ControlInput {
  double jerk = 0.0;   // m/s^3
  double steer = 0.0;  // steering acceleration, rad/s^2
};

struct GlobalPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct VehicleGeometry {
  double length = 4.0;
  double width = 1.8;
  double l_f = 2.0;  // CoG to front
  double l_r = 2.0;  // CoG to rear
};

/// Speed/acceleration/steering state bounds and the two control boxes.
struct Limits {
  double v_min = 0.0, v_max = 10.0;
  double a_min = -3.5, a_max = 3.5;
  double jerk_min = -4.0, jerk_max = 4.0;
  double delta_min = -1.0, delta_max = 1.0;
  double omega_min = -0.5, omega_max = 0.5;
  double steer_min = -2.0, steer_max = 2.0;

  void validate() const;

  // Vector form over (s, d, mu, v, a, delta, omega); unbounded entries are +-inf.
  std::array<double, kStateDim> state_min() const;
  std::array<double, kStateDim> state_max() const;

  bool control_within(const ControlInput& u, double tol = 0.0) const;
  ControlInput clamp(const ControlInput& u) const;
  VehicleState clamp(const VehicleState& x) const;
};

template <class S>
S slip_angle(const S& delta, const VehicleGeometry& g) {
  using std::atan;
  using std::tan;
  return atan((g.l_r / (g.l_r + g.l_f)) * tan(delta));
}

/// Drift of the Frenet bicycle model (control-free part). Works on any scalar
/// type so Lie derivatives can be taken with nested duals. The returned array
/// has the same length as the input; an eighth (clock) entry gets drift 1.
template <class S, std::size_t N>
std::array<S, N> drift(const std::array<S, N>& x, double kappa, const VehicleGeometry& g) {
  static_assert(N == kStateDim || N == kAugDim);
  using std::cos;
  using std::sin;
  const double denom = 1.0 - value_of(x[kD]) * kappa;
  if (!(denom > kSingularityGuard)) {
    throw SingularityError("1 - d*kappa = " + std::to_string(denom) + " at or below guard");
  }
  const S beta = slip_angle(x[kDelta], g);
  const S heading = x[kMu] + beta;
  const S s_dot = x[kV] * cos(heading) / (1.0 - x[kD] * kappa);
  std::array<S, N> f{};
  f[kS] = s_dot;
  f[kD] = x[kV] * sin(heading);
  f[kMu] = x[kV] / g.l_r * sin(beta) - kappa * s_dot;
  f[kV] = x[kA];
  f[kA] = S(0.0);
  f[kDelta] = x[kOmega];
  f[kOmega] = S(0.0);
  if constexpr (N == kAugDim) f[kTau] = S(1.0);
  return f;
}

std::array<double, kStateDim> drift_f(const VehicleState& x, double kappa, const VehicleGeometry& g = {});

/// Classical RK4 step of the Frenet model with zero-order-hold control and
/// curvature frozen over the step.
VehicleState rk4_step(const VehicleState& x, const ControlInput& u, double kappa, double dt,
                      const VehicleGeometry& g = {});

/// Inertial-frame twin of the Frenet model: (x, y, theta, v, a, delta, omega).
/// Used by the simulator so that the integrated motion does not depend on the
/// reference path the controller happens to track.
struct InertialState {
  double x = 0.0, y = 0.0, theta = 0.0;
  double v = 0.0, a = 0.0, delta = 0.0, omega = 0.0;
  GlobalPose pose() const { return {x, y, theta}; }
};

InertialState rk4_step_inertial(const InertialState& x, const ControlInput& u, double dt,
                                const VehicleGeometry& g = {});

double wrap_angle(double a);

}  // namespace rulecbf
