#pragma once

// Independent reference QP solver for tests: Mehrotra predictor-corrector
// primal-dual interior point on  min 0.5 x'Hx + f'x  s.t.  G x <= h.
// Shares no code with the production active-set solver.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace oracle {

struct IpmResult {
  bool converged = false;
  Eigen::VectorXd x;
  double objective = 0.0;
};

inline IpmResult ipm_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& f, const Eigen::MatrixXd& G,
                           const Eigen::VectorXd& h, int max_iter = 200) {
  const auto n = f.size();
  const auto m = h.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(m);
  IpmResult out;
  if (m == 0) {
    out.x = H.ldlt().solve(-f);
    out.objective = 0.5 * out.x.dot(H * out.x) + f.dot(out.x);
    out.converged = true;
    return out;
  }
  // Start with slacks large enough to be interior.
  {
    Eigen::VectorXd r = h - G * x;
    for (Eigen::Index i = 0; i < m; ++i) s[i] = std::max(1.0, r[i]);
  }

  auto step_to_boundary = [](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double a = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
    }
    return a;
  };

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd rd = H * x + f + G.transpose() * z;
    const Eigen::VectorXd rp = G * x + s - h;
    const double mu = s.dot(z) / static_cast<double>(m);
    const double scale = 1.0 + std::max(f.lpNorm<Eigen::Infinity>(), h.lpNorm<Eigen::Infinity>());
    // The reduced system gets ill-conditioned as s -> 0, so rd floors near
    // 1e-9; stop there rather than iterate into noise.
    if (rd.lpNorm<Eigen::Infinity>() < 1e-8 * scale && rp.lpNorm<Eigen::Infinity>() < 1e-8 * scale &&
        mu < 1e-11 * scale) {
      out.converged = true;
      break;
    }
    // Reduced system: (H + G' diag(z/s) G) dx = -rd - G' diag(1/s) (z .* rp - rc)
    const Eigen::VectorXd w = z.cwiseQuotient(s);
    const Eigen::MatrixXd K = H + G.transpose() * w.asDiagonal() * G;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(K);

    auto solve_dir = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
      // rc: target for s.*z (complementarity residual s.*z - target)
      const Eigen::VectorXd rhs = -rd - G.transpose() * ((z.cwiseProduct(rp) - rc).cwiseQuotient(s));
      dx = ldlt.solve(rhs);
      ds = -rp - G * dx;
      dz = -(rc + z.cwiseProduct(ds)).cwiseQuotient(s);
    };

    Eigen::VectorXd dx, ds, dz;
    const Eigen::VectorXd rc_aff = s.cwiseProduct(z);
    solve_dir(rc_aff, dx, ds, dz);
    const double a_aff = std::min(step_to_boundary(s, ds), step_to_boundary(z, dz));
    const double mu_aff = (s + a_aff * ds).dot(z + a_aff * dz) / static_cast<double>(m);
    const double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    const Eigen::VectorXd rc = s.cwiseProduct(z) + ds.cwiseProduct(dz) - Eigen::VectorXd::Constant(m, sigma * mu);
    solve_dir(rc, dx, ds, dz);
    const double a = std::min(1.0, 0.99 * std::min(step_to_boundary(s, ds), step_to_boundary(z, dz)));
    x += a * dx;
    s += a * ds;
    z += a * dz;
  }
  out.x = x;
  out.objective = 0.5 * x.dot(H * x) + f.dot(x);
  return out;
}

}  // namespace oracle
