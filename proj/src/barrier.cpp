#include "rulecbf/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace rulecbf {

void ClassKChain::validate() const {
  if (gains.empty()) throw std::invalid_argument("class-K chain needs at least one gain");
  for (double k : gains) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("class-K gains must be positive and finite");
  }
}

ClassKChain ClassKChain::resized(int m) const {
  validate();
  ClassKChain c;
  for (int i = 0; i < m; ++i) c.gains.push_back(gains[std::min<std::size_t>(i, gains.size() - 1)]);
  return c;
}

int relative_degree(const ScalarField& b, const DriftModel& f, const AugState<double>& x, double tol) {
  for (int k = 0; k < kMaxRelativeDegree; ++k) {
    const auto g = lie_g(b, f, x, k);
    if (std::abs(g[0]) > tol || std::abs(g[1]) > tol) return k + 1;
  }
  throw DegreeOverflowError("no control influence up to order " + std::to_string(kMaxRelativeDegree));
}

std::vector<double> psi_expansion(const ClassKChain& chain, int j) {
  if (j < 0 || j > static_cast<int>(chain.gains.size())) throw std::invalid_argument("psi_expansion: bad order");
  std::vector<double> c{1.0};
  for (int level = 1; level <= j; ++level) {
    std::vector<double> next(c.size() + 1, 0.0);
    const double k = chain.gains[level - 1];
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];  // derivative shifts L_f^i -> L_f^{i+1}
      next[i] += k * c[i];
    }
    c = std::move(next);
  }
  return c;
}

std::vector<double> psi_values(const HocbfSpec& spec, const DriftModel& f, const AugState<double>& x) {
  const int m = spec.relative_degree;
  const ClassKChain chain = spec.chain.resized(m);
  std::vector<double> lf(m);
  for (int i = 0; i < m; ++i) lf[i] = lie_f(*spec.barrier, f, x, i);
  std::vector<double> out;
  for (int j = 0; j < m; ++j) {
    const auto c = psi_expansion(chain, j);
    double acc = 0.0;
    for (int i = 0; i <= j; ++i) acc += c[i] * lf[i];
    out.push_back(acc);
  }
  return out;
}

LinearConstraintRow hocbf_row(const HocbfSpec& spec, const DriftModel& f, const AugState<double>& x) {
  const int m = spec.relative_degree;
  if (m < 1 || m > kMaxRelativeDegree) throw std::invalid_argument("hocbf_row: relative degree out of range");
  const ClassKChain chain = spec.chain.resized(m);
  const auto c_prev = psi_expansion(chain, m - 1);
  const auto c_full = psi_expansion(chain, m);

  LinearConstraintRow row;
  row.owner = spec.owner;
  row.sense = Sense::kGreaterEqual;
  for (int i = 0; i <= m; ++i) row.constant += c_full[i] * lie_f(*spec.barrier, f, x, i);
  // d/dt psi_{m-1} = L_f psi_{m-1} + L_g psi_{m-1} u.
  for (int i = 0; i < m; ++i) {
    const auto g = lie_g(*spec.barrier, f, x, i);
    row.jerk += c_prev[i] * g[0];
    row.steer += c_prev[i] * g[1];
  }
  if (spec.relaxable) row.relax = -1.0;
  return row;
}

LinearConstraintRow clf_row(const ClfSpec& spec, const DriftModel& f, const AugState<double>& x) {
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("clf epsilon must be positive");
  const auto g = lie_g(*spec.V, f, x, 0);
  LinearConstraintRow row;
  row.owner = "clf";
  row.sense = Sense::kLessEqual;
  row.jerk = g[0];
  row.steer = g[1];
  row.delta_e = -1.0;
  row.constant = lie_f(*spec.V, f, x, 1) + spec.epsilon * spec.V->eval(x);
  return row;
}

void ClfGains::validate() const {
  for (double g : {k1, c0, k_d, k_mu, k_delta, epsilon}) {
    if (!(g > 0.0)) throw std::invalid_argument("CLF gains must be positive");
  }
  if (c_lat < 0.0) throw std::invalid_argument("CLF lateral weight must be non-negative");
}

ClfSpec build_tracking_clf(const ClfGains& g, const TrackingTarget& t) {
  g.validate();
  auto V = [g, t](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    const S tau = x[kTau];
    const S v_c = t.v + t.a * tau + 0.5 * t.jerk * tau * tau;
    const S a_c = t.a + t.jerk * tau;
    const S delta_c = t.delta + t.omega * tau + 0.5 * t.steer * tau * tau;
    const S omega_c = t.omega + t.steer * tau;
    const S lon = (x[kA] - a_c) + g.k1 * (x[kV] - v_c);
    const S lat = (x[kOmega] - omega_c) + g.k_delta * (x[kDelta] - delta_c) +
                  g.k_mu * ((x[kMu] - t.mu) + g.k_d * (x[kD] - t.d));
    return S(g.c0 * lon * lon + g.c_lat * lat * lat);
  };
  return {make_field(V), g.epsilon};
}

}  // namespace rulecbf
