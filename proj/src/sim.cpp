#include "covpath/sim.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "covpath/csv.hpp"
#include "covpath/errors.hpp"
#include "covpath/generator_circle.hpp"
#include "covpath/generator_ellipse.hpp"

namespace covpath {

namespace {

struct AgentRuntime {
  VehicleState state;
  Direction direction;
  double radius;
  Vec3 shape;
  ActuatorModel actuator;
  PiController rate_pi;
  PiController heading_pi;
  std::size_t segment = 0;

  AgentRuntime(const SimConfig& cfg, const Pose& pose)
      : direction(cfg.generator.initial_direction),
        radius(cfg.generator.radius_initial),
        shape(cfg.generator.shape_initial),
        actuator(cfg.dt, cfg.actuator.gain, cfg.actuator.pole,
                 cfg.actuator.delay) {
    state.pose = pose;
    state.forward_speed = cfg.fleet.speed;
    rate_pi.kp = cfg.actuator.rate_kp;
    rate_pi.ki = cfg.actuator.rate_ki;
    rate_pi.sign = -1.0;
    rate_pi.u_max = cfg.actuator.u_max;
    heading_pi.kp = cfg.baseline.heading_kp;
    heading_pi.ki = cfg.baseline.heading_ki;
    heading_pi.sign = cfg.fidelity == Fidelity::Actuated ? -1.0 : 1.0;
    heading_pi.u_max = cfg.actuator.u_max;
  }
};

std::vector<Rect> split_region(const Rect& region, int n) {
  const Vec2 extent = region.max - region.min;
  const bool along_x = extent.x() >= extent.y();
  std::vector<Rect> out;
  for (int i = 0; i < n; ++i) {
    Rect r = region;
    if (along_x) {
      const double w = extent.x() / n;
      r.min.x() = region.min.x() + i * w;
      r.max.x() = region.min.x() + (i + 1) * w;
    } else {
      const double h = extent.y() / n;
      r.min.y() = region.min.y() + i * h;
      r.max.y() = region.min.y() + (i + 1) * h;
    }
    out.push_back(r);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "; ";
    out += parts[i];
  }
  return out;
}

}  // namespace

SimLog run_simulation(const SimConfig& cfg) {
  const std::vector<std::string> problems = validate(cfg);
  if (!problems.empty()) throw ConfigError(join(problems));
  if (cfg.mode == Mode::Baseline && cfg.safety.enabled)
    throw ConfigError("safety filter applies to generator modes only");

  const EnvironmentConfig& env = cfg.environment;
  const int n = cfg.agent_count();
  SimLog log;
  log.grid = ObservationGrid::from_extent(env.origin, env.extent, env.cell_size);
  const ObservationGrid& grid = log.grid;
  const int m = grid.size();
  const std::vector<Vec2> points = grid.points();

  ImportanceField field(m, env.phi_initial);
  field.phi_min = env.phi_min;
  field.phi_max = env.phi_max;
  field.gain_up = env.gain_up;
  field.gain_down = env.gain_down;

  std::vector<AgentRuntime> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (const Pose& pose : cfg.fleet.initial_poses)
    agents.emplace_back(cfg, pose);

  if (cfg.mode == Mode::Baseline) {
    const std::vector<Rect> regions = split_region(
        Rect{cfg.baseline.region_min, cfg.baseline.region_max}, n);
    for (int i = 0; i < n; ++i) {
      log.plans.push_back(build_lawnmower(regions[static_cast<std::size_t>(i)],
                                          cfg.baseline.stripe_width,
                                          cfg.baseline.spacing));
      agents[static_cast<std::size_t>(i)].segment =
          log.plans.back().closest_segment(
              agents[static_cast<std::size_t>(i)].state.pose.position);
    }
  }

  std::optional<PoolShape> pool;
  SafetyConfig safety_cfg;
  if (cfg.safety.enabled) {
    pool = PoolShape::axis_aligned(cfg.safety.pool_center,
                                   cfg.safety.pool_half_extent,
                                   cfg.safety.pool_margin);
    safety_cfg.alpha_right = cfg.safety.alpha_right;
    safety_cfg.alpha_left = cfg.safety.alpha_left;
    safety_cfg.lambda_ca = cfg.safety.lambda_ca;
  }

  CircleGenConfig ccfg;
  ccfg.r_min = cfg.generator.radius_min;
  ccfg.r_max = cfg.generator.radius_max;
  ccfg.gamma = cfg.generator.gamma;
  ccfg.n_agents = n;
  ccfg.lambda = cfg.generator.lambda;
  ccfg.alpha1 = cfg.generator.alpha[0];
  ccfg.alpha2 = cfg.generator.alpha[1];
  ccfg.alpha3 = cfg.generator.alpha[2];
  ccfg.epsilon = cfg.generator.epsilon_fraction * cfg.generator.gamma / n;
  ccfg.hysteresis = cfg.generator.hysteresis;

  EllipseGenConfig ecfg;
  ecfg.s_min = cfg.generator.axis_min;
  ecfg.s_max = cfg.generator.axis_max;
  ecfg.gamma = cfg.generator.gamma;
  ecfg.n_agents = n;
  ecfg.lambda = cfg.generator.lambda;
  ecfg.alpha1 = cfg.generator.alpha[0];
  ecfg.alpha2 = cfg.generator.alpha[1];
  ecfg.alpha3 = cfg.generator.alpha[2];
  ecfg.alpha4 = cfg.generator.alpha[3];
  ecfg.alpha5 = cfg.generator.alpha[4];
  ecfg.epsilon = cfg.generator.epsilon_fraction * cfg.generator.gamma / n;
  ecfg.hysteresis = cfg.generator.hysteresis;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto steps = static_cast<long long>(std::llround(cfg.duration / cfg.dt));
  const long long snap_every =
      std::max(1LL, std::llround(cfg.output.snapshot_period / cfg.dt));
  const double sigma = env.sigma;
  const bool proposed = cfg.mode != Mode::Baseline;

  const auto score_matrix = [&]() {
    Eigen::MatrixXd scores(n, m);
    for (int i = 0; i < n; ++i) {
      const AgentRuntime& a = agents[static_cast<std::size_t>(i)];
      for (int j = 0; j < m; ++j)
        scores(i, j) =
            cfg.mode == Mode::Circle
                ? circle_path_score(a.radius, a.state.pose, a.direction,
                                    points[static_cast<std::size_t>(j)], sigma)
                : ellipse_path_score(a.shape, a.state.pose, a.direction,
                                     points[static_cast<std::size_t>(j)],
                                     sigma);
    }
    return scores;
  };

  int snapshot_index = 0;
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;

    std::vector<Vec2> positions;
    positions.reserve(static_cast<std::size_t>(n));
    for (const AgentRuntime& a : agents) positions.push_back(a.state.pose.position);
    const std::vector<double> rates = field.rates(grid, positions, sigma);

    // Central phase: partition and importance rates from the current field
    // state; agents consume this broadcast below.
    std::vector<PointSet> cells(static_cast<std::size_t>(n));
    PhiRecord phi_rec;
    phi_rec.t = t;
    phi_rec.sum_phi = field.total();
    if (proposed) {
      const Eigen::MatrixXd scores = score_matrix();
      const Partition part = compute_partition(scores);
      if (cfg.output.log_objective) {
        phi_rec.objective = global_objective(scores, field.phi);
        phi_rec.has_objective = true;
      }
      for (int i = 0; i < n; ++i) {
        PointSet& ps = cells[static_cast<std::size_t>(i)];
        const std::vector<int>& own = part.cells[static_cast<std::size_t>(i)];
        ps.points.reserve(own.size());
        ps.phi.reserve(own.size());
        ps.phi_dot.reserve(own.size());
        for (int j : own) {
          ps.points.push_back(points[static_cast<std::size_t>(j)]);
          ps.phi.push_back(field.phi[static_cast<std::size_t>(j)]);
          ps.phi_dot.push_back(rates[static_cast<std::size_t>(j)]);
        }
      }
    }
    log.phi.push_back(phi_rec);

    if (k % snap_every == 0)
      log.snapshots.push_back(FieldSnapshot{snapshot_index++, t, field.phi});

    field.apply_rates(rates, cfg.dt);

    for (int i = 0; i < n; ++i) {
      AgentRuntime& a = agents[static_cast<std::size_t>(i)];
      const Pose pose = a.state.pose;
      double omega_star = 0.0;
      double omega_ref = 0.0;
      double omega = 0.0;

      if (cfg.mode == Mode::Baseline) {
        const LawnmowerPlan& plan = log.plans[static_cast<std::size_t>(i)];
        a.segment = advance_waypoint(pose.position, plan, a.segment,
                                     cfg.baseline.switch_distance);
        const double theta_ref =
            los_heading(pose.position, plan.segment_start(a.segment),
                        plan.segment_end(a.segment), cfg.baseline.lookahead);
        const double err = wrap_angle(theta_ref - pose.heading);
        if (cfg.fidelity == Fidelity::Actuated) {
          const double u = a.heading_pi.step(err, cfg.dt);
          omega = a.actuator.step(u);
          omega_ref = omega;
        } else {
          omega_ref = a.heading_pi.step(err, cfg.dt);
          omega = omega_ref;
        }
        omega_star = omega_ref;
      } else {
        const PointSet& ps = cells[static_cast<std::size_t>(i)];
        const Vec3 z_dot{a.state.forward_speed * std::cos(pose.heading),
                         a.state.forward_speed * std::sin(pose.heading),
                         a.state.angular_rate};
        if (cfg.mode == Mode::Circle) {
          const CircleStep st =
              circle_generator_step(a.radius, a.state, z_dot, ps, ccfg, sigma);
          a.radius += st.rho * cfg.dt;
          const DirectionScores sc =
              circle_direction_scores(a.radius, pose, ps, sigma);
          a.direction = select_direction(sc, a.direction, ccfg.hysteresis);
          const Vec2 center = circle_center(a.radius, pose, a.direction);
          omega_star =
              circle_omega_star(a.radius, a.direction, a.state.forward_speed);

          CircleBarrierRecord rec;
          rec.t = t;
          rec.agent = i;
          rec.radius = a.radius;
          rec.direction = a.direction;
          rec.center = center;
          rec.b1 = share_barrier(sc, ccfg.gamma, ccfg.n_agents);
          std::tie(rec.b2, rec.b3) =
              radius_barriers(a.radius, ccfg.r_min, ccfg.r_max);
          rec.slack = st.slack;
          rec.qp_ok = st.qp == QpStatus::Optimal;
          log.circle_barriers.push_back(rec);
        } else {
          const EllipseStep st =
              ellipse_generator_step(a.shape, a.state, z_dot, ps, ecfg, sigma);
          a.shape += st.rho * cfg.dt;
          const DirectionScores sc =
              ellipse_direction_scores(a.shape, pose, ps, sigma);
          a.direction = select_direction(sc, a.direction, ecfg.hysteresis);
          const Vec2 center = ellipse_center(a.shape, pose, a.direction);
          omega_star = ellipse_omega_star(pose, center, a.shape, a.direction,
                                          a.state.forward_speed);

          EllipseBarrierRecord rec;
          rec.t = t;
          rec.agent = i;
          rec.shape = a.shape;
          rec.direction = a.direction;
          rec.center = center;
          rec.b1 = share_barrier(sc, ecfg.gamma, ecfg.n_agents);
          const ShapeBarriers sb =
              shape_barriers(a.shape, ecfg.s_min, ecfg.s_max);
          rec.b2 = sb.b2;
          rec.b3 = sb.b3;
          rec.b4 = sb.b4;
          rec.b5 = sb.b5;
          rec.slack = st.slack;
          rec.qp_ok = st.qp == QpStatus::Optimal;
          log.ellipse_barriers.push_back(rec);
        }

        if (pool) {
          const FilterResult fr = filter_omega(a.state, omega_star, *pool,
                                               cfg.safety.probes, safety_cfg);
          omega_ref = fr.omega_ref;
          WallRecord wr;
          wr.t = t;
          wr.agent = i;
          wr.b_right = fr.b_right;
          wr.b_left = fr.b_left;
          wr.omega_star = omega_star;
          wr.omega_ref = omega_ref;
          wr.slack = fr.slack;
          log.wall.push_back(wr);
        } else {
          omega_ref = omega_star;
        }

        if (cfg.fidelity == Fidelity::Actuated) {
          const double u =
              a.rate_pi.step(omega_ref - a.actuator.output(), cfg.dt);
          omega = a.actuator.step(u);
        } else {
          omega = omega_ref;
        }
      }

      if (cfg.omega_noise_std > 0.0) omega += cfg.omega_noise_std * gauss(rng);

      AgentRecord rec;
      rec.t = t;
      rec.agent = i;
      rec.position = pose.position;
      rec.heading = pose.heading;
      rec.omega_star = omega_star;
      rec.omega_ref = omega_ref;
      rec.omega_applied = omega;
      log.agents.push_back(rec);

      a.state = step_dubins(a.state, omega, cfg.dt);
    }
  }

  // Closing records at the final time.
  const double t_end = static_cast<double>(steps) * cfg.dt;
  PhiRecord final_rec;
  final_rec.t = t_end;
  final_rec.sum_phi = field.total();
  if (proposed && cfg.output.log_objective) {
    final_rec.objective = global_objective(score_matrix(), field.phi);
    final_rec.has_objective = true;
  }
  log.phi.push_back(final_rec);
  log.snapshots.push_back(FieldSnapshot{snapshot_index, t_end, field.phi});
  return log;
}

namespace {

std::string direction_label(Direction d) {
  return d == Direction::Right ? "right" : "left";
}

}  // namespace

void export_log(const SimLog& log, const SimConfig& cfg,
                const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string base = dir + "/";

  {
    std::ofstream cfg_out(base + "config.json",
                          std::ios::binary | std::ios::trunc);
    cfg_out << cfg.to_json_text();
  }

  {
    CsvFile f(base + "agents.csv");
    f.cell("t_s").cell("agent").cell("x_m").cell("y_m").cell("heading_rad");
    f.cell("omega_star").cell("omega_ref").cell("omega_applied");
    f.end_row();
    for (const AgentRecord& r : log.agents) {
      f.cell(r.t).cell(r.agent).cell(r.position.x()).cell(r.position.y());
      f.cell(r.heading).cell(r.omega_star).cell(r.omega_ref);
      f.cell(r.omega_applied);
      f.end_row();
    }
  }

  {
    CsvFile f(base + "barriers.csv");
    if (cfg.mode == Mode::Circle) {
      f.cell("t_s").cell("agent").cell("radius_m").cell("direction");
      f.cell("center_x_m").cell("center_y_m");
      f.cell("b1").cell("b2").cell("b3").cell("slack").cell("qp_ok");
      f.end_row();
      for (const CircleBarrierRecord& r : log.circle_barriers) {
        f.cell(r.t).cell(r.agent).cell(r.radius).cell(direction_label(r.direction));
        f.cell(r.center.x()).cell(r.center.y());
        f.cell(r.b1).cell(r.b2).cell(r.b3).cell(r.slack).cell(r.qp_ok ? 1 : 0);
        f.end_row();
      }
    } else if (cfg.mode == Mode::Ellipse) {
      f.cell("t_s").cell("agent").cell("s1").cell("s2").cell("s3");
      f.cell("direction").cell("center_x_m").cell("center_y_m");
      f.cell("b1").cell("b2").cell("b3").cell("b4").cell("b5");
      f.cell("slack").cell("qp_ok");
      f.end_row();
      for (const EllipseBarrierRecord& r : log.ellipse_barriers) {
        f.cell(r.t).cell(r.agent);
        f.cell(r.shape(0)).cell(r.shape(1)).cell(r.shape(2));
        f.cell(direction_label(r.direction));
        f.cell(r.center.x()).cell(r.center.y());
        f.cell(r.b1).cell(r.b2).cell(r.b3).cell(r.b4).cell(r.b5);
        f.cell(r.slack).cell(r.qp_ok ? 1 : 0);
        f.end_row();
      }
    } else {
      f.cell("t_s").cell("agent");
      f.end_row();
    }
  }

  {
    CsvFile f(base + "phi_sum.csv");
    const bool with_obj = !log.phi.empty() && log.phi.front().has_objective;
    f.cell("t_s").cell("sum_phi");
    if (with_obj) f.cell("objective");
    f.end_row();
    for (const PhiRecord& r : log.phi) {
      f.cell(r.t).cell(r.sum_phi);
      if (with_obj) f.cell(r.has_objective ? r.objective : 0.0);
      f.end_row();
    }
  }

  if (!log.wall.empty()) {
    CsvFile f(base + "wall.csv");
    f.cell("t_s").cell("agent").cell("b_right").cell("b_left");
    f.cell("omega_star").cell("omega_ref").cell("slack");
    f.end_row();
    for (const WallRecord& r : log.wall) {
      f.cell(r.t).cell(r.agent).cell(r.b_right).cell(r.b_left);
      f.cell(r.omega_star).cell(r.omega_ref).cell(r.slack);
      f.end_row();
    }
  }

  for (std::size_t i = 0; i < log.plans.size(); ++i) {
    CsvFile f(base + "plan_" + std::to_string(i) + ".csv");
    f.cell("x_m").cell("y_m");
    f.end_row();
    for (const Vec2& w : log.plans[i].waypoints) {
      f.cell(w.x()).cell(w.y());
      f.end_row();
    }
  }

  for (const FieldSnapshot& snap : log.snapshots) {
    char name[32];
    std::snprintf(name, sizeof(name), "field_%04d.csv", snap.index);
    CsvFile f(base + name);
    f.cell("x_m").cell("y_m").cell("phi");
    f.end_row();
    for (int j = 0; j < log.grid.size(); ++j) {
      const Vec2 q = log.grid.point(j);
      f.cell(q.x()).cell(q.y()).cell(snap.phi[static_cast<std::size_t>(j)]);
      f.end_row();
    }
  }
}

std::vector<double> read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field snapshot: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("empty field snapshot: " + path);
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos)
      throw ConfigError("malformed field snapshot row: " + line);
    out.push_back(parse_double(std::string_view(line).substr(b + 1)));
  }
  return out;
}

}  // namespace covpath
