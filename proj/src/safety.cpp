#include "covpath/safety.hpp"

#include <cmath>

#include "covpath/errors.hpp"

namespace covpath {

PoolShape PoolShape::axis_aligned(const Vec2& center, const Vec2& half_extent,
                                  double margin) {
  const double ax = half_extent.x() - margin;
  const double ay = half_extent.y() - margin;
  if (ax <= 0.0 || ay <= 0.0)
    throw ConfigError("pool margin leaves no interior");
  PoolShape pool;
  pool.center = center;
  pool.weight = Mat2::Zero();
  pool.weight(0, 0) = 1.0 / (ax * ax * ax * ax);
  pool.weight(1, 1) = 1.0 / (ay * ay * ay * ay);
  return pool;
}

double pool_mu(const PoolShape& pool, const Vec2& p) {
  const Vec2 d = p - pool.center;
  const Vec2 d2{d.x() * d.x(), d.y() * d.y()};
  return d2.dot(pool.weight * d2);
}

Vec2 pool_mu_gradient(const PoolShape& pool, const Vec2& p) {
  const Vec2 d = p - pool.center;
  const Vec2 d2{d.x() * d.x(), d.y() * d.y()};
  const Vec2 w = pool.weight * d2;
  return 4.0 * Vec2{d.x() * w.x(), d.y() * w.y()};
}

Vec2 probe_world(const Pose& z, const Vec2& probe_body) {
  return z.position + rotate(z.heading, probe_body);
}

double pool_barrier(const PoolShape& pool, const Pose& z,
                    const Vec2& probe_body) {
  return 1.0 - pool_mu(pool, probe_world(z, probe_body));
}

FilterResult filter_omega(const VehicleState& state, double omega_star,
                          const PoolShape& pool, const BodyProbePoints& probes,
                          const SafetyConfig& cfg) {
  const Pose& z = state.pose;
  const Vec2 heading = z.heading_dir();

  // A probe moves with the hull: its velocity is the surge term plus the
  // turn rate times the body offset rotated a quarter turn further.
  const auto row_terms = [&](const Vec2& probe_body, double alpha,
                             double barrier) {
    const Vec2 pw = probe_world(z, probe_body);
    const Vec2 grad = pool_mu_gradient(pool, pw);
    const double coeff = -grad.dot(rotate(z.heading + 0.5 * kPi, probe_body));
    const double rest =
        -grad.dot(heading) * state.forward_speed + alpha * barrier;
    return std::pair<double, double>{coeff, rest};
  };

  FilterResult out;
  out.b_right = pool_barrier(pool, z, probes.right);
  out.b_left = pool_barrier(pool, z, probes.left);
  const auto [cr, restr] = row_terms(probes.right, cfg.alpha_right, out.b_right);
  const auto [cl, restl] = row_terms(probes.left, cfg.alpha_left, out.b_left);

  QpProblem qp;
  qp.cost_diag.resize(2);
  qp.cost_diag << 1.0, cfg.lambda_ca;
  qp.cost_linear.resize(2);
  qp.cost_linear << -2.0 * omega_star, 0.0;
  qp.constraints = Eigen::MatrixXd::Zero(2, 2);
  qp.lower_bounds.resize(2);
  qp.constraints(0, 0) = cr;
  qp.lower_bounds(0) = -restr;
  qp.constraints(1, 0) = cl;
  qp.constraints(1, 1) = -1.0;
  qp.lower_bounds(1) = -restl;

  const QpSolution sol = solve_qp(qp);
  if (sol.status != QpStatus::Optimal) {
    out.omega_ref = omega_star;
    out.fallback = true;
    return out;
  }
  out.omega_ref = sol.x(0);
  out.slack = sol.x(1);
  return out;
}

}  // namespace covpath
