#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rulecbf {

/// min 0.5 x'Hx + f'x  s.t.  A x <= b,  lb <= x <= ub.
/// Infinite bounds are ignored.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd f;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;

  // Sizes H/f/lb/ub for n variables with no rows and unbounded boxes.
  static QpProblem with_size(int n);
  int num_vars() const { return static_cast<int>(f.size()); }
  int num_rows() const { return static_cast<int>(b.size()); }
  void validate() const;
};

enum class QpStatus { kOptimal, kInfeasible, kMaxIter };

const char* to_string(QpStatus s);

struct QpSolution {
  QpStatus status = QpStatus::kInfeasible;
  Eigen::VectorXd x;
  // Multipliers (>= 0) for the rows of A, the upper and the lower bounds.
  Eigen::VectorXd lambda;
  Eigen::VectorXd lambda_ub;
  Eigen::VectorXd lambda_lb;
  double objective = 0.0;
  int iterations = 0;
  // On infeasibility: nonnegative weights y over (A rows, ub rows, lb rows)
  // with sum y_i n_i ~= 0 and sum y_i rhs_i < 0.
  Eigen::VectorXd certificate;
};

/// Goldfarb-Idnani dual active-set method for strictly convex QPs.
class QpSolver {
 public:
  QpSolution solve(const QpProblem& p, double tol = 1e-8, int max_iter = 0);

 private:
  // Workspace reused across solves of equal size.
  Eigen::MatrixXd J_;
  Eigen::MatrixXd R_;
};

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;   // max constraint violation
  double dual = 0.0;     // most negative multiplier (as a positive number)
  double complementarity = 0.0;
  double max() const;
};

KktResiduals kkt_residuals(const QpProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& lambda_ub, const Eigen::VectorXd& lambda_lb);

bool kkt_check(const QpProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& lambda,
               const Eigen::VectorXd& lambda_ub, const Eigen::VectorXd& lambda_lb, double tol);
bool kkt_check(const QpProblem& p, const QpSolution& s, double tol);

}  // namespace rulecbf
