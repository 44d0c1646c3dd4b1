#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "covpath/coverage.hpp"
#include "covpath/field.hpp"
#include "covpath/geometry.hpp"
#include "covpath/qp.hpp"
#include "covpath/safety.hpp"
#include "covpath/vehicle.hpp"

namespace covpath {

enum class Mode { Circle, Ellipse, Baseline };
enum class Fidelity { Ideal, Actuated };

struct EnvironmentConfig {
  Vec2 origin{-4.0, -3.0};
  Vec2 extent{8.0, 6.0};
  double cell_size = 0.05;
  double sigma = 0.5;
  double gain_up = 0.02;
  double gain_down = 0.5;
  double phi_min = 0.0;
  double phi_max = 1.0;
  double phi_initial = 1.0;
};

struct FleetConfig {
  double speed = 0.26;
  std::vector<Pose> initial_poses;
};

struct GeneratorConfig {
  double gamma = 10.0;
  double lambda = 0.1;
  double epsilon_fraction = 0.01;  // epsilon = fraction * gamma / n
  double hysteresis = 0.0;
  std::array<double, 5> alpha{1.0, 1.0, 1.0, 1.0, 1.0};
  Direction initial_direction = Direction::Right;
  double radius_initial = 0.3;
  double radius_min = 0.2;
  double radius_max = 0.7;
  Vec3 shape_initial{1.0, 0.2, 0.7};
  double axis_min = 0.5;
  double axis_max = 1.2;
};

struct SafetySimConfig {
  bool enabled = false;
  Vec2 pool_center{0.0, 0.0};
  Vec2 pool_half_extent{2.5, 0.9};
  double pool_margin = 0.05;
  BodyProbePoints probes;
  double alpha_right = 0.15;
  double alpha_left = 0.15;
  double lambda_ca = 200.0;
};

struct ActuatorConfig {
  double gain = 14.19;
  double pole = 3.766;
  double delay = 0.016;
  double rate_kp = 0.28;
  double rate_ki = 1.0;
  double u_max = 2.0;
};

struct BaselineConfig {
  Vec2 region_min{-2.25, -0.85};
  Vec2 region_max{2.25, 0.85};
  double stripe_width = 0.4;
  double spacing = 0.2;
  double lookahead = 0.5;
  double switch_distance = 0.15;
  double heading_kp = 1.3;
  // Heading is an integrator already; integral action only winds up at the
  // stripe reversals and balloons the turn overshoot.
  double heading_ki = 0.0;
};

struct OutputConfig {
  std::string directory = "out";
  double snapshot_period = 30.0;
  bool log_objective = true;
};

struct SimConfig {
  Mode mode = Mode::Ellipse;
  Fidelity fidelity = Fidelity::Ideal;
  double dt = 0.05;
  double duration = 240.0;
  std::uint64_t seed = 0;
  double omega_noise_std = 0.0;
  EnvironmentConfig environment;
  FleetConfig fleet;
  GeneratorConfig generator;
  SafetySimConfig safety;
  ActuatorConfig actuator;
  BaselineConfig baseline;
  OutputConfig output;

  static SimConfig from_json_text(const std::string& text);
  static SimConfig from_json_file(const std::string& path);
  std::string to_json_text() const;

  int agent_count() const { return static_cast<int>(fleet.initial_poses.size()); }
};

/// All problems found; empty means the config is runnable.
std::vector<std::string> validate(const SimConfig& cfg);

struct AgentRecord {
  double t = 0.0;
  int agent = 0;
  Vec2 position{0.0, 0.0};
  double heading = 0.0;
  double omega_star = 0.0;
  double omega_ref = 0.0;
  double omega_applied = 0.0;
};

struct CircleBarrierRecord {
  double t = 0.0;
  int agent = 0;
  double radius = 0.0;
  Direction direction = Direction::Right;
  Vec2 center{0.0, 0.0};
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double slack = 0.0;
  bool qp_ok = true;
};

struct EllipseBarrierRecord {
  double t = 0.0;
  int agent = 0;
  Vec3 shape{1.0, 0.0, 1.0};
  Direction direction = Direction::Right;
  Vec2 center{0.0, 0.0};
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0;
  double slack = 0.0;
  bool qp_ok = true;
};

struct WallRecord {
  double t = 0.0;
  int agent = 0;
  double b_right = 0.0;
  double b_left = 0.0;
  double omega_star = 0.0;
  double omega_ref = 0.0;
  double slack = 0.0;
};

struct PhiRecord {
  double t = 0.0;
  double sum_phi = 0.0;
  double objective = 0.0;  // meaningful only when logged
  bool has_objective = false;
};

struct FieldSnapshot {
  int index = 0;
  double t = 0.0;
  std::vector<double> phi;
};

struct SimLog {
  ObservationGrid grid;
  std::vector<AgentRecord> agents;
  std::vector<CircleBarrierRecord> circle_barriers;
  std::vector<EllipseBarrierRecord> ellipse_barriers;
  std::vector<WallRecord> wall;
  std::vector<PhiRecord> phi;
  std::vector<FieldSnapshot> snapshots;
  std::vector<LawnmowerPlan> plans;  // baseline mode only
};

/// Runs the scenario to completion. Throws ConfigError when validation
/// fails.
SimLog run_simulation(const SimConfig& cfg);

/// Writes agents.csv, barriers.csv, phi_sum.csv, wall.csv (when present),
/// plan_N.csv (baseline) and field_XXXX.csv snapshots into dir.
void export_log(const SimLog& log, const SimConfig& cfg,
                const std::string& dir);

/// Reads back one field snapshot CSV (x_m, y_m, phi columns).
std::vector<double> read_field_csv(const std::string& path);

}  // namespace covpath
