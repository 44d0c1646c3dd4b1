#include "covpath/qp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace covpath {

namespace {

constexpr double kStepTol = 1e-12;

struct InnerResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;
  int iterations = 0;
};

// Active-set iteration from a feasible start. Maintains a working set of
// rows held at equality; each outer pass either moves to the constrained
// minimizer, adds the first blocking row, or drops the row with the most
// negative multiplier.
InnerResult minimize_from_feasible(const Eigen::VectorXd& d,
                                   const Eigen::VectorXd& q,
                                   const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& x0) {
  const int dim = static_cast<int>(d.size());
  const int rows = static_cast<int>(a.rows());
  Eigen::VectorXd x = x0;
  std::vector<int> work;
  std::vector<char> in_work(static_cast<std::size_t>(rows), 0);

  for (int iter = 1; iter <= kQpMaxIterations; ++iter) {
    const int nw = static_cast<int>(work.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim + nw, dim + nw);
    Eigen::VectorXd rhs(dim + nw);
    kkt.topLeftCorner(dim, dim) = (2.0 * d.array()).matrix().asDiagonal();
    for (int k = 0; k < nw; ++k) {
      kkt.block(0, dim + k, dim, 1) = -a.row(work[static_cast<std::size_t>(k)]).transpose();
      kkt.block(dim + k, 0, 1, dim) = a.row(work[static_cast<std::size_t>(k)]);
      rhs(dim + k) = b(work[static_cast<std::size_t>(k)]);
    }
    rhs.head(dim) = -q;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    // Backward-stable residual test: near-parallel rows can make the
    // multipliers huge while the system stays perfectly solvable.
    const double res_scale = 1.0 + rhs.norm() + kkt.norm() * sol.norm();
    if (!((kkt * sol - rhs).norm() <= 1e-12 * res_scale))
      throw std::runtime_error("qp working set became inconsistent");
    const Eigen::VectorXd target = sol.head(dim);
    const Eigen::VectorXd step = target - x;

    if (step.norm() <= kStepTol * (1.0 + x.norm())) {
      int drop = -1;
      double most_negative = -kQpKktTol;
      for (int k = 0; k < nw; ++k) {
        const double nu = sol(dim + k);
        if (nu < most_negative) {
          most_negative = nu;
          drop = k;
        }
      }
      if (drop < 0) {
        InnerResult res;
        res.x = target;
        res.multipliers = Eigen::VectorXd::Zero(rows);
        for (int k = 0; k < nw; ++k)
          res.multipliers(work[static_cast<std::size_t>(k)]) =
              std::max(0.0, sol(dim + k));
        res.iterations = iter;
        return res;
      }
      in_work[static_cast<std::size_t>(work[static_cast<std::size_t>(drop)])] = 0;
      work.erase(work.begin() + drop);
      continue;
    }

    // Largest feasible fraction of the step; the first blocking row (lowest
    // index) joins the working set.
    double alpha = 1.0;
    int blocker = -1;
    for (int i = 0; i < rows; ++i) {
      if (in_work[static_cast<std::size_t>(i)]) continue;
      const double along = a.row(i).dot(step);
      if (along >= -1e-14) continue;
      const double slack = a.row(i).dot(x) - b(i);
      const double limit = std::max(0.0, slack) / (-along);
      if (limit < alpha - 1e-15) {
        alpha = limit;
        blocker = i;
      }
    }
    x += alpha * step;
    if (blocker >= 0) {
      work.push_back(blocker);
      in_work[static_cast<std::size_t>(blocker)] = 1;
    }
  }
  throw std::runtime_error("qp active-set iteration limit exceeded");
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem) {
  const int dim = static_cast<int>(problem.cost_diag.size());
  const int rows = static_cast<int>(problem.constraints.rows());
  for (int k = 0; k < dim; ++k)
    if (!(problem.cost_diag(k) > 0.0))
      throw std::invalid_argument("qp cost_diag must be strictly positive");

  QpSolution out;
  out.x = Eigen::VectorXd::Zero(dim);
  out.multipliers = Eigen::VectorXd::Zero(rows);

  // Scale every row to unit norm so the feasibility tolerances read as
  // geometric distances no matter how callers scale their gradients. An
  // all-zero row is either vacuous or a flat contradiction.
  Eigen::MatrixXd a = problem.constraints;
  Eigen::VectorXd b = problem.lower_bounds;
  Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(rows);
  for (int i = 0; i < rows; ++i) {
    const double norm = a.row(i).norm();
    if (norm <= 1e-30) {
      if (b(i) > kQpFeasTol) {
        out.status = QpStatus::Infeasible;
        return out;
      }
      continue;
    }
    row_scale(i) = norm;
    a.row(i) /= norm;
    b(i) /= norm;
  }

  Eigen::VectorXd start = Eigen::VectorXd::Zero(dim);
  bool start_feasible = true;
  for (int i = 0; i < rows; ++i)
    if (-b(i) < -kQpFeasTol) start_feasible = false;

  int phase1_iters = 0;
  if (!start_feasible) {
    // Elastic phase: one shared relaxation sigma added to every row, driven
    // toward zero. A tiny curvature on x keeps the problem strictly convex;
    // it leaves a residual in sigma that grows with the relaxed point, so
    // the acceptance threshold below scales with that magnitude.
    const double mu = 1e-14;
    Eigen::VectorXd d1(dim + 1);
    d1.head(dim).setConstant(mu);
    d1(dim) = 1.0;
    Eigen::VectorXd q1 = Eigen::VectorXd::Zero(dim + 1);
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(rows + 1, dim + 1);
    a1.topLeftCorner(rows, dim) = a;
    a1.col(dim).head(rows).setOnes();
    a1(rows, dim) = 1.0;
    Eigen::VectorXd b1(rows + 1);
    b1.head(rows) = b;
    b1(rows) = 0.0;
    Eigen::VectorXd x1 = Eigen::VectorXd::Zero(dim + 1);
    x1(dim) = std::max(0.0, b.maxCoeff()) + 1.0;
    const InnerResult relax = minimize_from_feasible(d1, q1, a1, b1, x1);
    phase1_iters = relax.iterations;
    const double sigma_tol =
        kQpFeasTol * (1.0 + relax.x.head(dim).lpNorm<Eigen::Infinity>());
    if (relax.x(dim) > sigma_tol) {
      out.status = QpStatus::Infeasible;
      out.iterations = phase1_iters;
      return out;
    }
    start = relax.x.head(dim);
  }

  const InnerResult res = minimize_from_feasible(
      problem.cost_diag, problem.cost_linear, a, b, start);
  out.status = QpStatus::Optimal;
  out.x = res.x;
  for (int i = 0; i < rows; ++i)
    out.multipliers(i) = res.multipliers(i) / row_scale(i);
  out.iterations = phase1_iters + res.iterations;
  return out;
}

}  // namespace covpath
