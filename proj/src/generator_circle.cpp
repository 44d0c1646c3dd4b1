#include "covpath/generator_circle.hpp"

#include <cmath>

namespace covpath {

namespace {

double fd_step(double value) {
  return 1e-6 * std::max(1.0, std::abs(value));
}

}  // namespace

double circle_local_score(double r, const Pose& z, Direction dir,
                          const PointSet& ps, double sigma) {
  double sum = 0.0;
  for (std::size_t k = 0; k < ps.points.size(); ++k)
    sum += circle_path_score(r, z, dir, ps.points[k], sigma) * ps.phi[k];
  return sum;
}

DirectionScores circle_direction_scores(double r, const Pose& z,
                                        const PointSet& ps, double sigma) {
  DirectionScores sc;
  sc.right = circle_local_score(r, z, Direction::Right, ps, sigma);
  sc.left = circle_local_score(r, z, Direction::Left, ps, sigma);
  return sc;
}

std::pair<double, double> radius_barriers(double r, double r_min,
                                          double r_max) {
  return {r - r_min, r_max - r};
}

CircleGradients circle_score_gradients(double r, const Pose& z, Direction dir,
                                       const PointSet& ps, double sigma) {
  CircleGradients g;
  const double hr = fd_step(r);
  g.d_radius = (circle_local_score(r + hr, z, dir, ps, sigma) -
                circle_local_score(r - hr, z, dir, ps, sigma)) /
               (2.0 * hr);

  for (int k = 0; k < 3; ++k) {
    Pose lo = z;
    Pose hi = z;
    double h = 0.0;
    if (k < 2) {
      h = fd_step(z.position(k));
      lo.position(k) -= h;
      hi.position(k) += h;
    } else {
      h = fd_step(z.heading);
      // Bypass the wrap so the difference quotient stays symmetric.
      lo.heading = z.heading - h;
      hi.heading = z.heading + h;
    }
    g.d_pose(k) = (circle_local_score(r, hi, dir, ps, sigma) -
                   circle_local_score(r, lo, dir, ps, sigma)) /
                  (2.0 * h);
  }

  g.d_phi.resize(ps.points.size());
  for (std::size_t k = 0; k < ps.points.size(); ++k)
    g.d_phi[k] = circle_path_score(r, z, dir, ps.points[k], sigma);
  return g;
}

double circle_omega_star(double r, Direction dir, double speed) {
  return turn_sign(dir) * speed / r;
}

CircleStep circle_generator_step(double r, const VehicleState& state,
                                 const Vec3& z_dot, const PointSet& ps,
                                 const CircleGenConfig& cfg, double sigma) {
  CircleStep out;
  out.scores = circle_direction_scores(r, state.pose, ps, sigma);
  out.b1 = share_barrier(out.scores, cfg.gamma, cfg.n_agents);
  const auto [b2, b3] = radius_barriers(r, cfg.r_min, cfg.r_max);
  out.b2 = b2;
  out.b3 = b3;

  const std::vector<Direction> active =
      epsilon_active_directions(out.scores, cfg.epsilon);
  const int soft = static_cast<int>(active.size());

  QpProblem qp;
  qp.cost_diag.resize(2);
  qp.cost_diag << 1.0, cfg.lambda;
  qp.cost_linear = Eigen::VectorXd::Zero(2);
  qp.constraints = Eigen::MatrixXd::Zero(soft + 2, 2);
  qp.lower_bounds.resize(soft + 2);

  for (int k = 0; k < soft; ++k) {
    const CircleGradients g =
        circle_score_gradients(r, state.pose, active[static_cast<std::size_t>(k)], ps, sigma);
    double drift = g.d_pose.dot(z_dot);
    if (!ps.phi_dot.empty())
      for (std::size_t j = 0; j < g.d_phi.size(); ++j)
        drift += g.d_phi[j] * ps.phi_dot[j];
    qp.constraints(k, 0) = g.d_radius;
    qp.constraints(k, 1) = -1.0;
    qp.lower_bounds(k) = -(drift + cfg.alpha1 * out.b1);
  }
  qp.constraints(soft, 0) = 1.0;
  qp.lower_bounds(soft) = -cfg.alpha2 * out.b2;
  qp.constraints(soft + 1, 0) = -1.0;
  qp.lower_bounds(soft + 1) = -cfg.alpha3 * out.b3;

  const QpSolution sol = solve_qp(qp);
  out.qp = sol.status;
  if (sol.status == QpStatus::Optimal) {
    out.rho = sol.x(0);
    out.slack = sol.x(1);
  }
  return out;
}

}  // namespace covpath
