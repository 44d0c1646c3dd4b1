#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "covpath/errors.hpp"
#include "covpath/sim.hpp"

namespace covpath {

namespace {

using nlohmann::json;

json vec2_to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec2 vec2_from_json(const json& j) {
  return Vec2{j.at(0).get<double>(), j.at(1).get<double>()};
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Circle: return "circle";
    case Mode::Ellipse: return "ellipse";
    case Mode::Baseline: return "baseline";
  }
  return "ellipse";
}

Mode mode_from_name(const std::string& s) {
  if (s == "circle") return Mode::Circle;
  if (s == "ellipse") return Mode::Ellipse;
  if (s == "baseline") return Mode::Baseline;
  throw ConfigError("unknown mode: " + s);
}

std::string fidelity_name(Fidelity f) {
  return f == Fidelity::Ideal ? "ideal" : "actuated";
}

Fidelity fidelity_from_name(const std::string& s) {
  if (s == "ideal") return Fidelity::Ideal;
  if (s == "actuated") return Fidelity::Actuated;
  throw ConfigError("unknown fidelity: " + s);
}

std::string direction_name(Direction d) {
  return d == Direction::Right ? "right" : "left";
}

Direction direction_from_name(const std::string& s) {
  if (s == "right") return Direction::Right;
  if (s == "left") return Direction::Left;
  throw ConfigError("unknown direction: " + s);
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void maybe_vec2(const json& j, const char* key, Vec2& out) {
  if (j.contains(key)) out = vec2_from_json(j.at(key));
}

}  // namespace

SimConfig SimConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario parse error: ") + e.what());
  }

  SimConfig cfg;
  try {
    if (j.contains("mode")) cfg.mode = mode_from_name(j.at("mode"));
    if (j.contains("fidelity"))
      cfg.fidelity = fidelity_from_name(j.at("fidelity"));
    maybe(j, "dt_s", cfg.dt);
    maybe(j, "duration_s", cfg.duration);
    maybe(j, "seed", cfg.seed);
    maybe(j, "omega_noise_std", cfg.omega_noise_std);

    if (j.contains("environment")) {
      const json& e = j.at("environment");
      maybe_vec2(e, "origin_m", cfg.environment.origin);
      maybe_vec2(e, "extent_m", cfg.environment.extent);
      maybe(e, "cell_size_m", cfg.environment.cell_size);
      maybe(e, "sigma_m", cfg.environment.sigma);
      maybe(e, "phi_gain_up_per_s", cfg.environment.gain_up);
      maybe(e, "phi_gain_down_per_s", cfg.environment.gain_down);
      maybe(e, "phi_min", cfg.environment.phi_min);
      maybe(e, "phi_max", cfg.environment.phi_max);
      maybe(e, "phi_initial", cfg.environment.phi_initial);
    }

    if (j.contains("fleet")) {
      const json& f = j.at("fleet");
      maybe(f, "speed_mps", cfg.fleet.speed);
      if (f.contains("initial_poses")) {
        cfg.fleet.initial_poses.clear();
        for (const json& p : f.at("initial_poses"))
          cfg.fleet.initial_poses.emplace_back(
              vec2_from_json(p.at("position_m")),
              p.at("heading_rad").get<double>());
      }
    }

    if (j.contains("generator")) {
      const json& g = j.at("generator");
      maybe(g, "gamma", cfg.generator.gamma);
      maybe(g, "lambda_slack", cfg.generator.lambda);
      maybe(g, "epsilon_fraction", cfg.generator.epsilon_fraction);
      maybe(g, "hysteresis", cfg.generator.hysteresis);
      if (g.contains("alpha_slopes")) {
        const json& a = g.at("alpha_slopes");
        for (std::size_t k = 0; k < cfg.generator.alpha.size() && k < a.size(); ++k)
          cfg.generator.alpha[k] = a.at(k).get<double>();
      }
      if (g.contains("initial_direction"))
        cfg.generator.initial_direction =
            direction_from_name(g.at("initial_direction"));
      maybe(g, "radius_initial_m", cfg.generator.radius_initial);
      maybe(g, "radius_min_m", cfg.generator.radius_min);
      maybe(g, "radius_max_m", cfg.generator.radius_max);
      if (g.contains("shape_initial")) {
        const json& s = g.at("shape_initial");
        cfg.generator.shape_initial =
            Vec3{s.at(0).get<double>(), s.at(1).get<double>(),
                 s.at(2).get<double>()};
      }
      maybe(g, "axis_min_m", cfg.generator.axis_min);
      maybe(g, "axis_max_m", cfg.generator.axis_max);
    }

    if (j.contains("safety")) {
      const json& s = j.at("safety");
      maybe(s, "enabled", cfg.safety.enabled);
      maybe_vec2(s, "pool_center_m", cfg.safety.pool_center);
      maybe_vec2(s, "pool_half_extent_m", cfg.safety.pool_half_extent);
      maybe(s, "pool_margin_m", cfg.safety.pool_margin);
      maybe_vec2(s, "probe_right_m", cfg.safety.probes.right);
      maybe_vec2(s, "probe_left_m", cfg.safety.probes.left);
      maybe(s, "alpha_right", cfg.safety.alpha_right);
      maybe(s, "alpha_left", cfg.safety.alpha_left);
      maybe(s, "lambda_slack", cfg.safety.lambda_ca);
    }

    if (j.contains("actuator")) {
      const json& a = j.at("actuator");
      maybe(a, "gain", cfg.actuator.gain);
      maybe(a, "pole_per_s", cfg.actuator.pole);
      maybe(a, "delay_s", cfg.actuator.delay);
      maybe(a, "rate_kp", cfg.actuator.rate_kp);
      maybe(a, "rate_ki", cfg.actuator.rate_ki);
      maybe(a, "u_max", cfg.actuator.u_max);
    }

    if (j.contains("baseline")) {
      const json& b = j.at("baseline");
      maybe_vec2(b, "region_min_m", cfg.baseline.region_min);
      maybe_vec2(b, "region_max_m", cfg.baseline.region_max);
      maybe(b, "stripe_width_m", cfg.baseline.stripe_width);
      maybe(b, "spacing_m", cfg.baseline.spacing);
      maybe(b, "lookahead_m", cfg.baseline.lookahead);
      maybe(b, "switch_distance_m", cfg.baseline.switch_distance);
      maybe(b, "heading_kp", cfg.baseline.heading_kp);
      maybe(b, "heading_ki", cfg.baseline.heading_ki);
    }

    if (j.contains("output")) {
      const json& o = j.at("output");
      maybe(o, "directory", cfg.output.directory);
      maybe(o, "field_snapshot_period_s", cfg.output.snapshot_period);
      maybe(o, "log_objective", cfg.output.log_objective);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario field error: ") + e.what());
  }
  return cfg;
}

SimConfig SimConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string SimConfig::to_json_text() const {
  json j;
  j["mode"] = mode_name(mode);
  j["fidelity"] = fidelity_name(fidelity);
  j["dt_s"] = dt;
  j["duration_s"] = duration;
  j["seed"] = seed;
  j["omega_noise_std"] = omega_noise_std;

  json e;
  e["origin_m"] = vec2_to_json(environment.origin);
  e["extent_m"] = vec2_to_json(environment.extent);
  e["cell_size_m"] = environment.cell_size;
  e["sigma_m"] = environment.sigma;
  e["phi_gain_up_per_s"] = environment.gain_up;
  e["phi_gain_down_per_s"] = environment.gain_down;
  e["phi_min"] = environment.phi_min;
  e["phi_max"] = environment.phi_max;
  e["phi_initial"] = environment.phi_initial;
  j["environment"] = e;

  json f;
  f["speed_mps"] = fleet.speed;
  json poses = json::array();
  for (const Pose& p : fleet.initial_poses) {
    json q;
    q["position_m"] = vec2_to_json(p.position);
    q["heading_rad"] = p.heading;
    poses.push_back(q);
  }
  f["initial_poses"] = poses;
  j["fleet"] = f;

  json g;
  g["gamma"] = generator.gamma;
  g["lambda_slack"] = generator.lambda;
  g["epsilon_fraction"] = generator.epsilon_fraction;
  g["hysteresis"] = generator.hysteresis;
  g["alpha_slopes"] = generator.alpha;
  g["initial_direction"] = direction_name(generator.initial_direction);
  g["radius_initial_m"] = generator.radius_initial;
  g["radius_min_m"] = generator.radius_min;
  g["radius_max_m"] = generator.radius_max;
  g["shape_initial"] = json::array({generator.shape_initial(0),
                                    generator.shape_initial(1),
                                    generator.shape_initial(2)});
  g["axis_min_m"] = generator.axis_min;
  g["axis_max_m"] = generator.axis_max;
  j["generator"] = g;

  json s;
  s["enabled"] = safety.enabled;
  s["pool_center_m"] = vec2_to_json(safety.pool_center);
  s["pool_half_extent_m"] = vec2_to_json(safety.pool_half_extent);
  s["pool_margin_m"] = safety.pool_margin;
  s["probe_right_m"] = vec2_to_json(safety.probes.right);
  s["probe_left_m"] = vec2_to_json(safety.probes.left);
  s["alpha_right"] = safety.alpha_right;
  s["alpha_left"] = safety.alpha_left;
  s["lambda_slack"] = safety.lambda_ca;
  j["safety"] = s;

  json a;
  a["gain"] = actuator.gain;
  a["pole_per_s"] = actuator.pole;
  a["delay_s"] = actuator.delay;
  a["rate_kp"] = actuator.rate_kp;
  a["rate_ki"] = actuator.rate_ki;
  a["u_max"] = actuator.u_max;
  j["actuator"] = a;

  json b;
  b["region_min_m"] = vec2_to_json(baseline.region_min);
  b["region_max_m"] = vec2_to_json(baseline.region_max);
  b["stripe_width_m"] = baseline.stripe_width;
  b["spacing_m"] = baseline.spacing;
  b["lookahead_m"] = baseline.lookahead;
  b["switch_distance_m"] = baseline.switch_distance;
  b["heading_kp"] = baseline.heading_kp;
  b["heading_ki"] = baseline.heading_ki;
  j["baseline"] = b;

  json o;
  o["directory"] = output.directory;
  o["field_snapshot_period_s"] = output.snapshot_period;
  o["log_objective"] = output.log_objective;
  j["output"] = o;

  return j.dump(2) + "\n";
}

std::vector<std::string> validate(const SimConfig& cfg) {
  std::vector<std::string> problems;
  const auto bad = [&](const std::string& msg) { problems.push_back(msg); };

  if (!(cfg.dt > 0.0)) bad("dt_s must be positive");
  if (!(cfg.duration > 0.0)) bad("duration_s must be positive");
  if (cfg.dt > 0.0 && cfg.duration > 0.0 && cfg.duration < cfg.dt)
    bad("duration_s shorter than one step");
  if (cfg.omega_noise_std < 0.0) bad("omega_noise_std must be nonnegative");

  const EnvironmentConfig& e = cfg.environment;
  if (!(e.cell_size > 0.0)) bad("environment.cell_size_m must be positive");
  if (!(e.extent.x() > 0.0 && e.extent.y() > 0.0))
    bad("environment.extent_m must be positive");
  if (!(e.sigma > 0.0)) bad("environment.sigma_m must be positive");
  if (e.gain_up < 0.0) bad("environment.phi_gain_up_per_s must be nonnegative");
  if (e.gain_down < 0.0)
    bad("environment.phi_gain_down_per_s must be nonnegative");
  if (!(e.phi_max > e.phi_min)) bad("environment.phi_max must exceed phi_min");
  if (e.phi_initial < e.phi_min || e.phi_initial > e.phi_max)
    bad("environment.phi_initial outside [phi_min, phi_max]");

  if (cfg.fleet.initial_poses.empty()) bad("fleet.initial_poses is empty");
  if (!(cfg.fleet.speed > 0.0)) bad("fleet.speed_mps must be positive");
  for (std::size_t i = 0; i < cfg.fleet.initial_poses.size(); ++i) {
    const Pose& p = cfg.fleet.initial_poses[i];
    if (!std::isfinite(p.position.x()) || !std::isfinite(p.position.y()) ||
        !std::isfinite(p.heading))
      bad("fleet.initial_poses[" + std::to_string(i) + "] is not finite");
  }

  const GeneratorConfig& g = cfg.generator;
  if (g.gamma < 0.0) bad("generator.gamma must be nonnegative");
  if (!(g.lambda > 0.0)) bad("generator.lambda_slack must be positive");
  if (g.epsilon_fraction < 0.0)
    bad("generator.epsilon_fraction must be nonnegative");
  if (g.hysteresis < 0.0) bad("generator.hysteresis must be nonnegative");
  for (double a : g.alpha)
    if (!(a > 0.0)) bad("generator.alpha_slopes must be positive");
  if (cfg.mode == Mode::Circle) {
    if (!(g.radius_min > 0.0)) bad("generator.radius_min_m must be positive");
    if (!(g.radius_max > g.radius_min))
      bad("generator.radius_max_m must exceed radius_min_m");
    if (!(g.radius_initial > 0.0))
      bad("generator.radius_initial_m must be positive");
  }
  if (cfg.mode == Mode::Ellipse) {
    if (!(g.axis_min > 0.0)) bad("generator.axis_min_m must be positive");
    if (!(g.axis_max > g.axis_min))
      bad("generator.axis_max_m must exceed axis_min_m");
    if (!shape_is_pd(g.shape_initial))
      bad("generator.shape_initial is not positive definite");
  }

  const SafetySimConfig& s = cfg.safety;
  if (s.enabled) {
    if (!(s.pool_half_extent.x() > s.pool_margin &&
          s.pool_half_extent.y() > s.pool_margin))
      bad("safety.pool_margin_m leaves no pool interior");
    if (!(s.alpha_right > 0.0 && s.alpha_left > 0.0))
      bad("safety alpha slopes must be positive");
    if (!(s.lambda_ca > 0.0)) bad("safety.lambda_slack must be positive");
  }

  const ActuatorConfig& a = cfg.actuator;
  if (cfg.fidelity == Fidelity::Actuated) {
    if (!(a.pole > 0.0)) bad("actuator.pole_per_s must be positive");
    if (!(a.gain > 0.0)) bad("actuator.gain must be positive");
    if (a.delay < 0.0) bad("actuator.delay_s must be nonnegative");
    if (!(a.u_max > 0.0)) bad("actuator.u_max must be positive");
  }

  const BaselineConfig& b = cfg.baseline;
  if (cfg.mode == Mode::Baseline) {
    if (!(b.region_max.x() > b.region_min.x() &&
          b.region_max.y() > b.region_min.y()))
      bad("baseline region is empty");
    if (!(b.stripe_width > 0.0)) bad("baseline.stripe_width_m must be positive");
    if (!(b.spacing > 0.0)) bad("baseline.spacing_m must be positive");
    if (!(b.lookahead > 0.0)) bad("baseline.lookahead_m must be positive");
    if (!(b.switch_distance > 0.0))
      bad("baseline.switch_distance_m must be positive");
  }

  if (!(cfg.output.snapshot_period > 0.0))
    bad("output.field_snapshot_period_s must be positive");
  return problems;
}

}  // namespace covpath
