#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rulecbf/field.hpp"
#include "rulecbf/lie.hpp"

namespace rulecbf {

inline constexpr int kMaxRelativeDegree = 4;

class DegreeOverflowError : public std::runtime_error {
 public:
  explicit DegreeOverflowError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear class-K gains alpha_i(x) = k_i * x.
struct ClassKChain {
  std::vector<double> gains;

  void validate() const;
  // Pads (with the last gain) or truncates to exactly m entries.
  ClassKChain resized(int m) const;
};

struct HocbfSpec {
  FieldPtr barrier;
  int relative_degree = 1;
  ClassKChain chain{{1.0}};
  bool relaxable = false;
  std::string owner;  // rule id, or "limit" for state bounds
};

enum class Sense { kGreaterEqual, kLessEqual };

/// jerk*u_jerk + steer*u_steer + delta_e*δ_e + relax*δ_own + constant (sense) 0.
struct LinearConstraintRow {
  double jerk = 0.0;
  double steer = 0.0;
  double delta_e = 0.0;
  double relax = 0.0;
  double constant = 0.0;
  Sense sense = Sense::kGreaterEqual;
  std::string owner;

  double evaluate(double u_jerk, double u_steer, double de = 0.0, double dl = 0.0) const {
    return jerk * u_jerk + steer * u_steer + delta_e * de + relax * dl + constant;
  }
  bool satisfied(double u_jerk, double u_steer, double de, double dl, double tol) const {
    const double v = evaluate(u_jerk, u_steer, de, dl);
    return sense == Sense::kGreaterEqual ? v >= -tol : v <= tol;
  }
};

/// Smallest m with |L_g L_f^{m-1} b(x)| > tol in any control channel.
int relative_degree(const ScalarField& b, const DriftModel& f, const AugState<double>& x, double tol = 1e-8);

/// psi_0..psi_{m-1} at x (the HOCBF chain values).
std::vector<double> psi_values(const HocbfSpec& spec, const DriftModel& f, const AugState<double>& x);

/// Coefficients c_i of psi_j = sum_i c_i L_f^i b for the linear chain.
std::vector<double> psi_expansion(const ClassKChain& chain, int j);

LinearConstraintRow hocbf_row(const HocbfSpec& spec, const DriftModel& f, const AugState<double>& x);

struct ClfSpec {
  FieldPtr V;
  double epsilon = 1.0;
};

/// L_gV u + L_fV + eps V - δ_e <= 0.
LinearConstraintRow clf_row(const ClfSpec& spec, const DriftModel& f, const AugState<double>& x);

struct ClfGains {
  double k1 = 1.0;       // speed error gain
  double c0 = 1e5;       // longitudinal weight; large so tracking is not bought with δ_e
  double c_lat = 1e5;    // lateral weight
  double k_d = 0.5;      // lateral offset gain (1/m)
  double k_mu = 2.0;     // heading error gain
  double k_delta = 3.0;  // steering angle gain
  double epsilon = 1.0;  // CLF convergence rate
  void validate() const;
};

/// Reference the tracking CLF drives towards, at the step start (clock = 0).
/// Longitudinal targets are extrapolated polynomially in the clock.
struct TrackingTarget {
  double v = 4.0;
  double a = 0.0;
  double jerk = 0.0;
  double d = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  double omega = 0.0;
  double steer = 0.0;
};

/// V = c0 (e_a + k1 e_v)^2 + c_lat (e_w + k_delta e_delta + k_mu (e_mu + k_d e_d))^2.
/// With zero lateral targets the lateral term is (omega - omega_hat)^2 with
/// omega_hat = -k_delta delta - k_mu (mu + k_d d).
ClfSpec build_tracking_clf(const ClfGains& gains, const TrackingTarget& target);

}  // namespace rulecbf
