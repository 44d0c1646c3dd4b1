#include "covpath/vehicle.hpp"

#include <cmath>
#include <limits>

#include "covpath/errors.hpp"

namespace covpath {

ActuatorModel::ActuatorModel(double dt, double gain, double pole, double delay,
                             double sign)
    : gain(gain), pole(pole), delay(delay), sign(sign) {
  if (dt <= 0.0) throw ConfigError("actuator dt must be positive");
  if (pole <= 0.0) throw ConfigError("actuator pole must be positive");
  decay_ = std::exp(-pole * dt);
  const auto taps = static_cast<std::size_t>(std::llround(delay / dt));
  delay_line_.assign(taps, 0.0);
}

double ActuatorModel::step(double u) {
  double delayed = u;
  if (!delay_line_.empty()) {
    delayed = delay_line_[head_];
    delay_line_[head_] = u;
    head_ = (head_ + 1) % delay_line_.size();
  }
  // Exact zero-order-hold discretization of omega' = -pole*omega + K*u.
  omega_ = decay_ * omega_ + sign * (gain / pole) * (1.0 - decay_) * delayed;
  return omega_;
}

void ActuatorModel::reset(double omega) {
  omega_ = omega;
  std::fill(delay_line_.begin(), delay_line_.end(), 0.0);
  head_ = 0;
}

double PiController::step(double error, double dt) {
  integral_ += error * dt;
  double raw = kp * error + ki * integral_;
  if (std::abs(raw) > u_max) {
    raw = std::copysign(u_max, raw);
    // Back-calculate the accumulator so the output sits exactly at the limit.
    if (ki != 0.0) integral_ = (raw - kp * error) / ki;
  }
  return sign * raw;
}

double los_heading(const Vec2& p, const Vec2& seg_start, const Vec2& seg_end,
                   double lookahead) {
  const Vec2 d = seg_end - seg_start;
  const double path_angle = std::atan2(d.y(), d.x());
  const Vec2 rel = p - seg_start;
  const double cross =
      -std::sin(path_angle) * rel.x() + std::cos(path_angle) * rel.y();
  return wrap_angle(path_angle - std::atan(cross / lookahead));
}

std::size_t LawnmowerPlan::closest_segment(const Vec2& p) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < waypoints.size(); ++k) {
    const Vec2& a = segment_start(k);
    const Vec2& b = segment_end(k);
    const Vec2 ab = b - a;
    double t = 0.0;
    const double len2 = ab.squaredNorm();
    if (len2 > 0.0) t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    const double d = (a + t * ab - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

namespace {

// Appends points along the straight segment from the previous waypoint to
// `to`, spaced at most `spacing`, excluding the start point.
void append_leg(std::vector<Vec2>& wp, const Vec2& to, double spacing,
                bool include_end) {
  const Vec2 from = wp.back();
  const double len = (to - from).norm();
  const int pieces = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  const int last = include_end ? pieces : pieces - 1;
  for (int k = 1; k <= last; ++k)
    wp.push_back(from + (static_cast<double>(k) / pieces) * (to - from));
}

// Appends a half-turn arc from angle a0 to a1 around `center`, excluding the
// starting angle.
void append_arc(std::vector<Vec2>& wp, const Vec2& center, double radius,
                double a0, double a1, double spacing) {
  const double sweep = a1 - a0;
  const int pieces = std::max(
      1, static_cast<int>(std::ceil(std::abs(sweep) * radius / spacing)));
  for (int k = 1; k <= pieces; ++k) {
    const double a = a0 + sweep * static_cast<double>(k) / pieces;
    wp.push_back(center + radius * Vec2{std::cos(a), std::sin(a)});
  }
}

}  // namespace

LawnmowerPlan build_lawnmower(const Rect& region, double stripe_width,
                              double spacing) {
  if (stripe_width <= 0.0 || spacing <= 0.0)
    throw ConfigError("stripe width and spacing must be positive");
  const Vec2 extent = region.max - region.min;
  if (extent.x() <= 0.0 || extent.y() <= 0.0)
    throw RegionTooSmall("region has no area");

  // Stripes run parallel to the longer side.
  const bool along_x = extent.x() >= extent.y();
  const double long_len = along_x ? extent.x() : extent.y();
  const double short_len = along_x ? extent.y() : extent.x();

  const int stripes =
      static_cast<int>(std::floor(short_len / stripe_width + 1e-9)) + 1;
  const double radius = 0.5 * stripe_width;
  if (stripes < 2)
    throw RegionTooSmall("region narrower than one stripe pitch");
  if (long_len <= 2.0 * radius)
    throw RegionTooSmall("region too short for end turns");

  // Center the stripe band across the short side; inset the stripe ends so
  // the end turns stay inside the region.
  const double band = static_cast<double>(stripes - 1) * stripe_width;
  const double s0 = 0.5 * (short_len - band);
  const double lo_l = radius;
  const double hi_l = long_len - radius;

  const auto to_world = [&](double l, double s) {
    return along_x ? Vec2{region.min.x() + l, region.min.y() + s}
                   : Vec2{region.min.x() + s, region.min.y() + l};
  };

  std::vector<Vec2> wp;
  wp.push_back(to_world(lo_l, s0));
  for (int k = 0; k < stripes; ++k) {
    const double s = s0 + k * stripe_width;
    const bool forward = (k % 2 == 0);
    append_leg(wp, to_world(forward ? hi_l : lo_l, s), spacing, true);
    if (k + 1 == stripes) break;
    // Half turn up to the next stripe, bulging past the stripe ends.
    const Vec2 center = to_world(forward ? hi_l : lo_l, s + radius);
    if (along_x) {
      append_arc(wp, center, radius, -0.5 * kPi,
                 forward ? 0.5 * kPi : -1.5 * kPi, spacing);
    } else {
      append_arc(wp, center, radius, kPi, forward ? 0.0 : 2.0 * kPi, spacing);
    }
  }
  // Close the loop with a straight return to the start.
  append_leg(wp, wp.front(), spacing, false);

  LawnmowerPlan plan;
  plan.waypoints = std::move(wp);
  if (plan.waypoints.size() < 3)
    throw RegionTooSmall("degenerate lawnmower plan");
  return plan;
}

std::size_t advance_waypoint(const Vec2& p, const LawnmowerPlan& plan,
                             std::size_t current, double switch_distance) {
  const Vec2& a = plan.segment_start(current);
  const Vec2& b = plan.segment_end(current);
  const Vec2 ab = b - a;
  // Hop when near the segment end, or once the projection has slid past it:
  // without the overshoot test a missed corner leaves the follower chasing
  // the infinite extension of this segment forever.
  const bool past = (p - a).dot(ab) >= ab.squaredNorm();
  if (past || (p - b).norm() < switch_distance)
    return (current + 1) % plan.waypoints.size();
  return current;
}

}  // namespace covpath
