#include "rulecbf/vehicle.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace rulecbf {

void Limits::validate() const {
  auto check = [](double lo, double hi, const char* name) {
    if (!(lo < hi)) throw std::invalid_argument(std::string("limits: ") + name + " min must be < max");
  };
  check(v_min, v_max, "v");
  check(a_min, a_max, "a");
  check(jerk_min, jerk_max, "u_jerk");
  check(delta_min, delta_max, "delta");
  check(omega_min, omega_max, "omega");
  check(steer_min, steer_max, "u_steer");
}

std::array<double, kStateDim> Limits::state_min() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {-inf, -inf, -inf, v_min, a_min, delta_min, omega_min};
}

std::array<double, kStateDim> Limits::state_max() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, inf, inf, v_max, a_max, delta_max, omega_max};
}

bool Limits::control_within(const ControlInput& u, double tol) const {
  return u.jerk >= jerk_min - tol && u.jerk <= jerk_max + tol && u.steer >= steer_min - tol &&
         u.steer <= steer_max + tol;
}

ControlInput Limits::clamp(const ControlInput& u) const {
  return {std::clamp(u.jerk, jerk_min, jerk_max), std::clamp(u.steer, steer_min, steer_max)};
}

VehicleState Limits::clamp(const VehicleState& x) const {
  VehicleState y = x;
  y.v = std::clamp(y.v, v_min, v_max);
  y.a = std::clamp(y.a, a_min, a_max);
  y.delta = std::clamp(y.delta, delta_min, delta_max);
  y.omega = std::clamp(y.omega, omega_min, omega_max);
  return y;
}

std::array<double, kStateDim> drift_f(const VehicleState& x, double kappa, const VehicleGeometry& g) {
  return drift(x.to_array(), kappa, g);
}

namespace {

using Vec7 = std::array<double, kStateDim>;

Vec7 full_dynamics(const Vec7& x, const ControlInput& u, double kappa, const VehicleGeometry& g) {
  Vec7 f = drift(x, kappa, g);
  f[kA] += u.jerk;
  f[kOmega] += u.steer;
  return f;
}

Vec7 axpy(const Vec7& x, double h, const Vec7& k) {
  Vec7 y;
  for (int i = 0; i < kStateDim; ++i) y[i] = x[i] + h * k[i];
  return y;
}

}  // namespace

VehicleState rk4_step(const VehicleState& x, const ControlInput& u, double kappa, double dt,
                      const VehicleGeometry& g) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  const Vec7 x0 = x.to_array();
  const Vec7 k1 = full_dynamics(x0, u, kappa, g);
  const Vec7 k2 = full_dynamics(axpy(x0, 0.5 * dt, k1), u, kappa, g);
  const Vec7 k3 = full_dynamics(axpy(x0, 0.5 * dt, k2), u, kappa, g);
  const Vec7 k4 = full_dynamics(axpy(x0, dt, k3), u, kappa, g);
  Vec7 out;
  for (int i = 0; i < kStateDim; ++i) out[i] = x0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return VehicleState::from_array(out);
}

namespace {

Vec7 inertial_dynamics(const Vec7& x, const ControlInput& u, const VehicleGeometry& g) {
  const double beta = slip_angle(x[5], g);
  const double heading = x[2] + beta;
  return {x[3] * std::cos(heading), x[3] * std::sin(heading), x[3] / g.l_r * std::sin(beta), x[4], u.jerk, x[6],
          u.steer};
}

}  // namespace

InertialState rk4_step_inertial(const InertialState& s, const ControlInput& u, double dt,
                                const VehicleGeometry& g) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step_inertial: dt must be positive");
  const Vec7 x0{s.x, s.y, s.theta, s.v, s.a, s.delta, s.omega};
  const Vec7 k1 = inertial_dynamics(x0, u, g);
  const Vec7 k2 = inertial_dynamics(axpy(x0, 0.5 * dt, k1), u, g);
  const Vec7 k3 = inertial_dynamics(axpy(x0, 0.5 * dt, k2), u, g);
  const Vec7 k4 = inertial_dynamics(axpy(x0, dt, k3), u, g);
  Vec7 o;
  for (int i = 0; i < kStateDim; ++i) o[i] = x0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return {o[0], o[1], o[2], o[3], o[4], o[5], o[6]};
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a + pi, 2.0 * pi);
  if (a < 0.0) a += 2.0 * pi;
  return a - pi;
}

}  // namespace rulecbf
