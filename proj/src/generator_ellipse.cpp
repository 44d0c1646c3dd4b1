#include "covpath/generator_ellipse.hpp"

#include <cmath>

#include "covpath/errors.hpp"

namespace covpath {

namespace {

double fd_step(double value) {
  return 1e-6 * std::max(1.0, std::abs(value));
}

// s2^2 / den with the exact-zero limit; an off-diagonal term over a
// vanishing denominator has no finite limit.
double schur_term(double s2, double den) {
  if (std::abs(den) <= kDenomTol) {
    if (std::abs(s2) <= kDenomTol) return 0.0;
    throw DegenerateShape("shape barrier denominator vanished");
  }
  return s2 * s2 / den;
}

}  // namespace

ShapeBarriers shape_barriers(const Vec3& s, double s_min, double s_max) {
  ShapeBarriers b;
  const double hi = 1.0 / s_min;  // eigenvalue upper bound
  const double lo = 1.0 / s_max;  // eigenvalue lower bound
  b.b2 = hi - s(0);
  b.b3 = hi - s(2) - schur_term(s(1), b.b2);
  b.b4 = s(0) - lo;
  b.b5 = s(2) - lo - schur_term(s(1), b.b4);
  return b;
}

double ellipse_local_score(const Vec3& s, const Pose& z, Direction dir,
                           const PointSet& ps, double sigma) {
  double sum = 0.0;
  for (std::size_t k = 0; k < ps.points.size(); ++k)
    sum += ellipse_path_score(s, z, dir, ps.points[k], sigma) * ps.phi[k];
  return sum;
}

DirectionScores ellipse_direction_scores(const Vec3& s, const Pose& z,
                                         const PointSet& ps, double sigma) {
  DirectionScores sc;
  sc.right = ellipse_local_score(s, z, Direction::Right, ps, sigma);
  sc.left = ellipse_local_score(s, z, Direction::Left, ps, sigma);
  return sc;
}

EllipseGradients ellipse_score_gradients(const Vec3& s, const Pose& z,
                                         Direction dir, const PointSet& ps,
                                         double sigma) {
  EllipseGradients g;
  for (int k = 0; k < 3; ++k) {
    const double h = fd_step(s(k));
    Vec3 lo = s;
    Vec3 hi = s;
    lo(k) -= h;
    hi(k) += h;
    g.d_shape(k) = (ellipse_local_score(hi, z, dir, ps, sigma) -
                    ellipse_local_score(lo, z, dir, ps, sigma)) /
                   (2.0 * h);
  }
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
      lo.heading = z.heading - h;
      hi.heading = z.heading + h;
    }
    g.d_pose(k) = (ellipse_local_score(s, hi, dir, ps, sigma) -
                   ellipse_local_score(s, lo, dir, ps, sigma)) /
                  (2.0 * h);
  }
  g.d_phi.resize(ps.points.size());
  for (std::size_t k = 0; k < ps.points.size(); ++k)
    g.d_phi[k] = ellipse_path_score(s, z, dir, ps.points[k], sigma);
  return g;
}

double ellipse_curvature(const Vec2& p, const Vec2& c, const Vec3& s) {
  if (!shape_is_pd(s))
    throw NonPdShape("curvature needs a positive definite shape");
  const double half_gap = 0.5 * (s(0) - s(2));
  const double delta = std::sqrt(half_gap * half_gap + s(1) * s(1));
  const double lam1 = 0.5 * (s(0) + s(2)) + delta;
  const double lam2 = 0.5 * (s(0) + s(2)) - delta;

  Vec2 v1{1.0, 0.0};
  if (delta > 1e-15) {
    // Eigenvector of the larger eigenvalue; at least one candidate has norm
    // bounded below by delta.
    const Vec2 u1{s(1), lam1 - s(0)};
    const Vec2 u2{lam1 - s(2), s(1)};
    v1 = (u1.squaredNorm() >= u2.squaredNorm()) ? u1 : u2;
    v1.normalize();
  }
  const Vec2 v2{-v1.y(), v1.x()};

  const double ax = 1.0 / lam1;  // semi-axis along v1
  const double ay = 1.0 / lam2;
  const Vec2 d = p - c;
  const double t = std::atan2(v2.dot(d) / ay, v1.dot(d) / ax);
  const double st = std::sin(t);
  const double ct = std::cos(t);
  const double denom = std::pow(ax * ax * st * st + ay * ay * ct * ct, 1.5);
  return ax * ay / denom;
}

double ellipse_omega_star(const Pose& z, const Vec2& c, const Vec3& s,
                          Direction dir, double speed) {
  return turn_sign(dir) * speed * ellipse_curvature(z.position, c, s);
}

EllipseStep ellipse_generator_step(const Vec3& s, const VehicleState& state,
                                   const Vec3& z_dot, const PointSet& ps,
                                   const EllipseGenConfig& cfg, double sigma) {
  EllipseStep out;
  out.scores = ellipse_direction_scores(s, state.pose, ps, sigma);
  out.b1 = share_barrier(out.scores, cfg.gamma, cfg.n_agents);
  out.shape = shape_barriers(s, cfg.s_min, cfg.s_max);

  const std::vector<Direction> active =
      epsilon_active_directions(out.scores, cfg.epsilon);
  const int soft = static_cast<int>(active.size());

  QpProblem qp;
  qp.cost_diag.resize(4);
  qp.cost_diag << 1.0, 1.0, 1.0, cfg.lambda;
  qp.cost_linear = Eigen::VectorXd::Zero(4);
  qp.constraints = Eigen::MatrixXd::Zero(soft + 10, 4);
  qp.lower_bounds.resize(soft + 10);

  for (int k = 0; k < soft; ++k) {
    const EllipseGradients g = ellipse_score_gradients(
        s, state.pose, active[static_cast<std::size_t>(k)], ps, sigma);
    double drift = g.d_pose.dot(z_dot);
    if (!ps.phi_dot.empty())
      for (std::size_t j = 0; j < g.d_phi.size(); ++j)
        drift += g.d_phi[j] * ps.phi_dot[j];
    qp.constraints.block(k, 0, 1, 3) = g.d_shape.transpose();
    qp.constraints(k, 3) = -1.0;
    qp.lower_bounds(k) = -(drift + cfg.alpha1 * out.b1);
  }

  // Eigenvalue-box rows: time derivatives of b2..b5 in terms of the shape
  // rates, each kept above -alpha * barrier.
  const double hi_den = 1.0 / cfg.s_min - s(0);
  const double lo_den = s(0) - 1.0 / cfg.s_max;
  const auto ratio = [](double s2, double den) {
    if (std::abs(den) <= kDenomTol) return 0.0;  // exact-zero limit
    return s2 / den;
  };
  const double rh = ratio(s(1), hi_den);
  const double rl = ratio(s(1), lo_den);
  const int base = soft;
  qp.constraints(base, 0) = -1.0;
  qp.lower_bounds(base) = -cfg.alpha2 * out.shape.b2;
  qp.constraints.block(base + 1, 0, 1, 3) << -rh * rh, -2.0 * rh, -1.0;
  qp.lower_bounds(base + 1) = -cfg.alpha3 * out.shape.b3;
  qp.constraints(base + 2, 0) = 1.0;
  qp.lower_bounds(base + 2) = -cfg.alpha4 * out.shape.b4;
  qp.constraints.block(base + 3, 0, 1, 3) << rl * rl, -2.0 * rl, 1.0;
  qp.lower_bounds(base + 3) = -cfg.alpha5 * out.shape.b5;

  // Rate trust region; the slack picks up whatever share demand is left.
  for (int k = 0; k < 3; ++k) {
    qp.constraints(base + 4 + 2 * k, k) = 1.0;
    qp.lower_bounds(base + 4 + 2 * k) = -cfg.rate_max;
    qp.constraints(base + 5 + 2 * k, k) = -1.0;
    qp.lower_bounds(base + 5 + 2 * k) = -cfg.rate_max;
  }

  const QpSolution sol = solve_qp(qp);
  out.qp = sol.status;
  if (sol.status == QpStatus::Optimal) {
    out.rho = sol.x.head(3);
    out.slack = sol.x(3);
  }
  return out;
}

}  // namespace covpath
