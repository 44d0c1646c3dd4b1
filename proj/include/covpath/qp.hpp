#pragma once

#include <Eigen/Dense>

namespace covpath {

/// Strictly convex quadratic program with a diagonal Hessian:
///   minimize    x^T diag(cost_diag) x + cost_linear^T x
///   subject to  constraints * x >= lower_bounds   (row-wise)
/// cost_diag entries must be strictly positive.
struct QpProblem {
  Eigen::VectorXd cost_diag;
  Eigen::VectorXd cost_linear;
  Eigen::MatrixXd constraints;   // zero rows allowed to be absent (0 x n)
  Eigen::VectorXd lower_bounds;
};

enum class QpStatus { Optimal, Infeasible };

struct QpSolution {
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd x;            // minimizer when Optimal, zeros otherwise
  Eigen::VectorXd multipliers;  // one per constraint row, >= 0 when Optimal
  int iterations = 0;
};

// Constraint violations within this tolerance count as satisfied.
inline constexpr double kQpFeasTol = 1e-8;
// Multipliers above -kQpKktTol count as nonnegative.
inline constexpr double kQpKktTol = 1e-8;
inline constexpr int kQpMaxIterations = 100;

/// Primal active-set solve. Infeasible starts are handled by an elastic
/// phase that minimizes a common constraint relaxation first; if the
/// relaxation cannot be driven to zero the problem is reported Infeasible.
QpSolution solve_qp(const QpProblem& problem);

}  // namespace covpath
