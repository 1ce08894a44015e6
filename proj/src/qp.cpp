#include "rulecbf/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rulecbf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

QpProblem QpProblem::with_size(int n) {
  QpProblem p;
  p.H = MatrixXd::Identity(n, n);
  p.f = VectorXd::Zero(n);
  p.A = MatrixXd::Zero(0, n);
  p.b = VectorXd::Zero(0);
  p.lb = VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  p.ub = VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  return p;
}

void QpProblem::validate() const {
  const auto n = f.size();
  if (H.rows() != n || H.cols() != n) throw std::invalid_argument("qp: H must be n x n");
  if (A.cols() != n && A.rows() > 0) throw std::invalid_argument("qp: A must have n columns");
  if (A.rows() != b.size()) throw std::invalid_argument("qp: A and b row counts differ");
  if (lb.size() != n || ub.size() != n) throw std::invalid_argument("qp: bounds must have n entries");
  if (!H.allFinite() || !f.allFinite() || !A.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("qp: non-finite problem data");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isnan(lb[i]) || std::isnan(ub[i]) || lb[i] > ub[i]) throw std::invalid_argument("qp: bad bounds");
  }
}

const char* to_string(QpStatus s) {
  switch (s) {
    case QpStatus::kOptimal: return "optimal";
    case QpStatus::kInfeasible: return "infeasible";
    case QpStatus::kMaxIter: return "max-iter";
  }
  return "?";
}

namespace {

// Constraints in the solver's native form n_i' x >= c_i.
struct NativeConstraints {
  MatrixXd N;  // n x m
  VectorXd c;
  int rows = 0;                  // leading entries that come from A
  std::vector<int> ub_var, lb_var;  // variable index of each bound entry
};

NativeConstraints to_native(const QpProblem& p) {
  const int n = p.num_vars();
  NativeConstraints nc;
  nc.rows = p.num_rows();
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.ub[j])) nc.ub_var.push_back(j);
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.lb[j])) nc.lb_var.push_back(j);
  }
  const int m = nc.rows + static_cast<int>(nc.ub_var.size() + nc.lb_var.size());
  nc.N = MatrixXd::Zero(n, m);
  nc.c = VectorXd::Zero(m);
  int k = 0;
  for (int i = 0; i < nc.rows; ++i, ++k) {
    nc.N.col(k) = -p.A.row(i).transpose();
    nc.c[k] = -p.b[i];
  }
  for (int j : nc.ub_var) {
    nc.N(j, k) = -1.0;
    nc.c[k++] = -p.ub[j];
  }
  for (int j : nc.lb_var) {
    nc.N(j, k) = 1.0;
    nc.c[k++] = p.lb[j];
  }
  return nc;
}

// Rotation zeroing b in (a, b); returns h = hypot(a, b).
inline void givens(double a, double b, double& c, double& s, double& h) {
  h = std::hypot(a, b);
  if (h == 0.0) {
    c = 1.0;
    s = 0.0;
  } else {
    c = a / h;
    s = b / h;
  }
}

inline void rotate_cols(MatrixXd& M, int j0, int j1, double c, double s) {
  for (Eigen::Index k = 0; k < M.rows(); ++k) {
    const double t0 = M(k, j0), t1 = M(k, j1);
    M(k, j0) = c * t0 + s * t1;
    M(k, j1) = -s * t0 + c * t1;
  }
}

}  // namespace

QpSolution QpSolver::solve(const QpProblem& p, double tol, int max_iter) {
  p.validate();
  const int n = p.num_vars();
  const NativeConstraints nc = to_native(p);
  const int m = static_cast<int>(nc.c.size());
  if (max_iter <= 0) max_iter = 10 * (n + m) + 100;

  QpSolution sol;
  sol.lambda = VectorXd::Zero(p.num_rows());
  sol.lambda_ub = VectorXd::Zero(n);
  sol.lambda_lb = VectorXd::Zero(n);

  // H = L L', J = L^{-T} so that H^{-1} = J J'.
  Eigen::LLT<MatrixXd> llt(p.H);
  if (llt.info() != Eigen::Success) {
    MatrixXd Hr = p.H;
    Hr.diagonal().array() += 1e-10;
    llt.compute(Hr);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("qp: H is not positive definite");
  }
  const MatrixXd L = llt.matrixL();
  J_ = L.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(n, n));
  R_.setZero(n, n);

  VectorXd x = -(J_ * (J_.transpose() * p.f));
  std::vector<int> active;
  std::vector<double> u;  // multipliers of active constraints
  std::vector<char> is_active(m, 0);
  int q = 0;
  VectorXd d(n), z(n), r(n);

  auto slack = [&](int i) { return nc.N.col(i).dot(x) - nc.c[i]; };
  auto threshold = [&](int i) { return 1e-2 * tol * (1.0 + std::abs(nc.c[i])); };

  int iter = 0;
  for (;;) {
    // Step 1: most violated inactive constraint (ties -> smallest index).
    int pidx = -1;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      if (is_active[i]) continue;
      const double s = slack(i);
      if (s < -threshold(i) && -s > worst) {
        worst = -s;
        pidx = i;
      }
    }
    if (pidx < 0) break;

    double u_new = 0.0;  // multiplier of the constraint being added
    for (;;) {
      if (++iter > max_iter) {
        sol.status = QpStatus::kMaxIter;
        sol.x = x;
        sol.iterations = iter;
        return sol;
      }
      // Step 2a: primal and dual step directions.
      d.noalias() = J_.transpose() * nc.N.col(pidx);
      z.setZero();
      for (int j = q; j < n; ++j) z.noalias() += J_.col(j) * d[j];
      for (int i = q - 1; i >= 0; --i) {
        double acc = d[i];
        for (int j = i + 1; j < q; ++j) acc -= R_(i, j) * r[j];
        r[i] = acc / R_(i, i);
      }

      // Step 2b: step lengths.
      double t1 = std::numeric_limits<double>::infinity();
      int drop = -1;
      for (int j = 0; j < q; ++j) {
        if (r[j] > 1e-14 * (1.0 + std::abs(u[j]))) {
          const double t = u[j] / r[j];
          if (t < t1) {
            t1 = t;
            drop = j;
          }
        }
      }
      const double zn = z.dot(nc.N.col(pidx));
      const double s_p = slack(pidx);
      double t2 = std::numeric_limits<double>::infinity();
      if (std::abs(zn) > 1e-14 * (1.0 + nc.N.col(pidx).squaredNorm()) && z.norm() > 1e-14) t2 = -s_p / zn;

      if (!std::isfinite(t1) && !std::isfinite(t2)) {
        // n_p is a nonpositive combination of active normals: infeasible.
        sol.status = QpStatus::kInfeasible;
        sol.x = x;
        sol.iterations = iter;
        VectorXd y = VectorXd::Zero(m);
        y[pidx] = 1.0;
        for (int j = 0; j < q; ++j) y[active[j]] = std::max(0.0, -r[j]);
        sol.certificate = y;
        return sol;
      }

      if (!std::isfinite(t2)) {
        // Partial step in dual space only.
        for (int j = 0; j < q; ++j) u[j] -= t1 * r[j];
        u_new += t1;
      } else {
        const double t = std::min(t1, t2);
        x += t * z;
        for (int j = 0; j < q; ++j) u[j] -= t * r[j];
        u_new += t;
        if (t2 <= t1) {
          // Full step: add pidx to the active set.
          for (int j = n - 1; j > q; --j) {
            double c, s, h;
            givens(d[j - 1], d[j], c, s, h);
            if (s == 0.0) continue;
            d[j - 1] = h;
            d[j] = 0.0;
            rotate_cols(J_, j - 1, j, c, s);
          }
          for (int i = 0; i <= q; ++i) R_(i, q) = d[i];
          active.push_back(pidx);
          u.push_back(u_new);
          is_active[pidx] = 1;
          ++q;
          break;
        }
      }

      // Drop constraint `drop` and restore R to upper triangular.
      is_active[active[drop]] = 0;
      active.erase(active.begin() + drop);
      u.erase(u.begin() + drop);
      for (int col = drop; col < q - 1; ++col) R_.col(col) = R_.col(col + 1);
      R_.col(q - 1).setZero();
      for (int j = drop; j < q - 1; ++j) {
        double c, s, h;
        givens(R_(j, j), R_(j + 1, j), c, s, h);
        if (s == 0.0) continue;
        for (int col = j; col < q - 1; ++col) {
          const double a0 = R_(j, col), a1 = R_(j + 1, col);
          R_(j, col) = c * a0 + s * a1;
          R_(j + 1, col) = -s * a0 + c * a1;
        }
        R_(j + 1, j) = 0.0;
        rotate_cols(J_, j, j + 1, c, s);
      }
      --q;
    }
  }

  sol.status = QpStatus::kOptimal;
  sol.x = x;
  sol.iterations = iter;
  sol.objective = 0.5 * x.dot(p.H * x) + p.f.dot(x);
  for (int j = 0; j < q; ++j) {
    const int i = active[j];
    if (i < nc.rows) {
      sol.lambda[i] = u[j];
    } else if (i < nc.rows + static_cast<int>(nc.ub_var.size())) {
      sol.lambda_ub[nc.ub_var[i - nc.rows]] = u[j];
    } else {
      sol.lambda_lb[nc.lb_var[i - nc.rows - nc.ub_var.size()]] = u[j];
    }
  }
  return sol;
}

double KktResiduals::max() const { return std::max({stationarity, primal, dual, complementarity}); }

KktResiduals kkt_residuals(const QpProblem& p, const VectorXd& x, const VectorXd& lambda, const VectorXd& lambda_ub,
                           const VectorXd& lambda_lb) {
  KktResiduals r;
  const int n = p.num_vars();
  VectorXd g = p.H * x + p.f;
  if (p.num_rows() > 0) g += p.A.transpose() * lambda;
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.ub[j])) g[j] += lambda_ub[j];
    if (std::isfinite(p.lb[j])) g[j] -= lambda_lb[j];
  }
  r.stationarity = g.lpNorm<Eigen::Infinity>();
  auto acc = [&](double mult, double viol) {
    r.primal = std::max(r.primal, viol);
    r.dual = std::max(r.dual, -mult);
    r.complementarity = std::max(r.complementarity, std::abs(mult * viol));
  };
  for (int i = 0; i < p.num_rows(); ++i) acc(lambda[i], p.A.row(i).dot(x) - p.b[i]);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.ub[j])) acc(lambda_ub[j], x[j] - p.ub[j]);
    if (std::isfinite(p.lb[j])) acc(lambda_lb[j], p.lb[j] - x[j]);
  }
  return r;
}

bool kkt_check(const QpProblem& p, const VectorXd& x, const VectorXd& lambda, const VectorXd& lambda_ub,
               const VectorXd& lambda_lb, double tol) {
  if (x.size() != p.num_vars() || lambda.size() != p.num_rows()) return false;
  return kkt_residuals(p, x, lambda, lambda_ub, lambda_lb).max() <= tol;
}

bool kkt_check(const QpProblem& p, const QpSolution& s, double tol) {
  if (s.status != QpStatus::kOptimal) return false;
  return kkt_check(p, s.x, s.lambda, s.lambda_ub, s.lambda_lb, tol);
}

}  // namespace rulecbf
