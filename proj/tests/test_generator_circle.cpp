#include <doctest.h>

#include <cmath>

#include "covpath/generator_circle.hpp"

using namespace covpath;

namespace {

PointSet ring_points(const Vec2& around, int count, double spread) {
  PointSet ps;
  for (int k = 0; k < count; ++k) {
    const double a = kTwoPi * k / count;
    ps.points.push_back(around + spread * Vec2{std::cos(a), std::sin(a)});
    ps.phi.push_back(1.0);
    ps.phi_dot.push_back(0.0);
  }
  return ps;
}

}  // namespace

TEST_CASE("radius barriers are the box distances") {
  const auto [lo, hi] = radius_barriers(0.3, 0.2, 0.7);
  CHECK(lo == doctest::Approx(0.1));
  CHECK(hi == doctest::Approx(0.4));
}

TEST_CASE("omega star turns toward the path side") {
  CHECK(circle_omega_star(0.5, Direction::Right, 0.26) ==
        doctest::Approx(-0.52));
  CHECK(circle_omega_star(0.5, Direction::Left, 0.26) ==
        doctest::Approx(0.52));
}

TEST_CASE("symmetric point sets score both senses equally") {
  const Pose z(Vec2{0.0, 0.0}, 0.0);
  // points mirrored across the heading line
  PointSet ps;
  for (double y : {0.4, -0.4})
    for (double x : {-0.5, 0.0, 0.8}) {
      ps.points.push_back(Vec2{x, y});
      ps.phi.push_back(1.0);
    }
  const DirectionScores sc = circle_direction_scores(0.3, z, ps, 0.5);
  CHECK(sc.right == doctest::Approx(sc.left).epsilon(1e-12));
}

TEST_CASE("score gradients match the per-point construction") {
  const Pose z(Vec2{0.2, -0.1}, 0.4);
  const PointSet ps = ring_points(Vec2{0.3, 0.2}, 12, 0.6);
  const double sigma = 0.5;
  const CircleGradients g =
      circle_score_gradients(0.35, z, Direction::Right, ps, sigma);
  REQUIRE(g.d_phi.size() == ps.points.size());
  // importance gradient of the weighted sum is the per-point path score
  for (std::size_t j = 0; j < ps.points.size(); ++j) {
    CHECK(g.d_phi[j] ==
          doctest::Approx(circle_path_score(0.35, z, Direction::Right,
                                            ps.points[j], sigma)));
  }
  // the finite-difference radius slope agrees with a plain secant
  const double h = 1e-5;
  const double secant = (circle_local_score(0.35 + h, z, Direction::Right, ps,
                                            sigma) -
                         circle_local_score(0.35 - h, z, Direction::Right, ps,
                                            sigma)) /
                        (2.0 * h);
  CHECK(g.d_radius == doctest::Approx(secant).epsilon(1e-4));
}

TEST_CASE("empty assignment drains the slack only") {
  // with no points every score is zero, so the certificate row forces the
  // slack to absorb the whole share while the radius stays put
  CircleGenConfig cfg;
  cfg.gamma = 2.0;
  cfg.n_agents = 1;
  cfg.alpha1 = 1.0;
  VehicleState st;
  st.pose = Pose(Vec2{0.0, 0.0}, 0.0);
  PointSet empty;
  const CircleStep out = circle_generator_step(0.3, st, Vec3::Zero(), empty,
                                               cfg, 0.5);
  REQUIRE(out.qp == QpStatus::Optimal);
  CHECK(out.rho == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(out.slack == doctest::Approx(-cfg.gamma / cfg.n_agents));
  CHECK(out.b1 == doctest::Approx(-cfg.gamma / cfg.n_agents));
}

TEST_CASE("interior radius with a generous gamma keeps the box rows loose") {
  CircleGenConfig cfg;
  cfg.gamma = 0.1;  // easy to certify
  cfg.n_agents = 1;
  VehicleState st;
  st.pose = Pose(Vec2{0.0, 0.0}, 0.0);
  const PointSet ps = ring_points(Vec2{0.0, -0.4}, 16, 0.5);
  const CircleStep out = circle_generator_step(0.4, st, Vec3::Zero(), ps, cfg,
                                               0.5);
  REQUIRE(out.qp == QpStatus::Optimal);
  CHECK(out.b1 > 0.0);
  CHECK(out.b2 == doctest::Approx(0.2));
  CHECK(out.b3 == doctest::Approx(0.3));
  // with a comfortable certificate the step has no reason to slam the radius
  CHECK(std::abs(out.rho) < 10.0);
}

TEST_CASE("radius rate respects the box rows at the boundary") {
  CircleGenConfig cfg;
  cfg.gamma = 50.0;  // impossible target pushes the soft row hard
  cfg.n_agents = 1;
  cfg.alpha2 = 1.0;
  cfg.alpha3 = 1.0;
  VehicleState st;
  st.pose = Pose(Vec2{0.0, 0.0}, 0.0);
  const PointSet ps = ring_points(Vec2{0.0, -0.3}, 8, 0.4);

  // at the lower bound the rate cannot be negative
  const CircleStep lo = circle_generator_step(cfg.r_min, st, Vec3::Zero(), ps,
                                              cfg, 0.5);
  REQUIRE(lo.qp == QpStatus::Optimal);
  CHECK(lo.rho >= -1e-9);

  // at the upper bound the rate cannot be positive
  const CircleStep hi = circle_generator_step(cfg.r_max, st, Vec3::Zero(), ps,
                                              cfg, 0.5);
  REQUIRE(hi.qp == QpStatus::Optimal);
  CHECK(hi.rho <= 1e-9);
}
