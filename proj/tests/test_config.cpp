#include <doctest.h>

#include <string>

#include "covpath/errors.hpp"
#include "covpath/sim.hpp"

using namespace covpath;

namespace {

SimConfig two_agent_circle() {
  SimConfig cfg;
  cfg.mode = Mode::Circle;
  cfg.fidelity = Fidelity::Ideal;
  cfg.duration = 1.0;
  cfg.fleet.initial_poses = {Pose(Vec2{-1.0, 0.0}, 0.0),
                             Pose(Vec2{1.0, 0.0}, 0.0)};
  return cfg;
}

}  // namespace

TEST_CASE("json round trip is byte stable") {
  const SimConfig cfg = two_agent_circle();
  const std::string once = cfg.to_json_text();
  const SimConfig back = SimConfig::from_json_text(once);
  CHECK(back.to_json_text() == once);
  CHECK(back.agent_count() == 2);
  CHECK(back.mode == Mode::Circle);
  CHECK(back.duration == cfg.duration);
}

TEST_CASE("defaults survive a partial document") {
  const SimConfig cfg = SimConfig::from_json_text(R"({
    "mode": "ellipse",
    "fleet": {"initial_poses": [
      {"position_m": [-1.5, 1.5], "heading_rad": 0.0},
      {"position_m": [-1.5, -1.5], "heading_rad": 0.0}
    ]}
  })");
  CHECK(cfg.mode == Mode::Ellipse);
  CHECK(cfg.dt == 0.05);
  CHECK(cfg.environment.sigma == 0.5);
  CHECK(cfg.generator.gamma == 10.0);
  CHECK(cfg.agent_count() == 2);
  CHECK(cfg.fleet.initial_poses[0].position.y() == 1.5);
}

TEST_CASE("unknown enum names are rejected") {
  CHECK_THROWS_AS(SimConfig::from_json_text(R"({"mode": "square"})"),
                  ConfigError);
  CHECK_THROWS_AS(SimConfig::from_json_text(R"({"fidelity": "perfect"})"),
                  ConfigError);
  CHECK_THROWS_AS(SimConfig::from_json_text("{not json"), ConfigError);
}

TEST_CASE("validate accepts the studied setups") {
  CHECK(validate(two_agent_circle()).empty());

  SimConfig ell = two_agent_circle();
  ell.mode = Mode::Ellipse;
  CHECK(validate(ell).empty());
}

TEST_CASE("validate flags broken configs") {
  SimConfig none = two_agent_circle();
  none.fleet.initial_poses.clear();
  CHECK_FALSE(validate(none).empty());

  SimConfig bad_dt = two_agent_circle();
  bad_dt.dt = 0.0;
  CHECK_FALSE(validate(bad_dt).empty());

  SimConfig bad_radius = two_agent_circle();
  bad_radius.generator.radius_initial = -0.3;
  CHECK_FALSE(validate(bad_radius).empty());

  SimConfig bad_box = two_agent_circle();
  bad_box.generator.radius_min = 0.7;
  bad_box.generator.radius_max = 0.2;  // inverted box
  CHECK_FALSE(validate(bad_box).empty());

  SimConfig bad_shape = two_agent_circle();
  bad_shape.mode = Mode::Ellipse;
  bad_shape.generator.shape_initial = Vec3{1.0, 2.0, 1.0};  // not pd
  CHECK_FALSE(validate(bad_shape).empty());

  SimConfig bad_grid = two_agent_circle();
  bad_grid.environment.cell_size = -0.1;
  CHECK_FALSE(validate(bad_grid).empty());

  // several problems are reported together
  SimConfig multi = two_agent_circle();
  multi.dt = -1.0;
  multi.duration = -2.0;
  multi.fleet.speed = 0.0;
  CHECK(validate(multi).size() >= 3);
}

TEST_CASE("radius bounds are ignored when running the ellipse") {
  SimConfig ell = two_agent_circle();
  ell.mode = Mode::Ellipse;
  ell.generator.radius_initial = 99.0;  // irrelevant in this mode
  CHECK(validate(ell).empty());
}
