#pragma once

#include <cstddef>
#include <vector>

#include "covpath/geometry.hpp"

namespace covpath {

/// First-order yaw-rate response with input delay, discretized exactly under
/// a zero-order hold: omega' = -pole * omega + sign * gain * u(t - delay).
struct ActuatorModel {
  double gain = 14.19;
  double pole = 3.766;   // 1/s
  double delay = 0.016;  // seconds
  double sign = -1.0;    // rudder convention: positive input, negative yaw

  explicit ActuatorModel(double dt, double gain = 14.19, double pole = 3.766,
                         double delay = 0.016, double sign = -1.0);

  double step(double u);
  double output() const { return omega_; }
  void reset(double omega = 0.0);

 private:
  double decay_ = 0.0;  // exp(-pole * dt)
  double omega_ = 0.0;
  std::vector<double> delay_line_;  // oldest input at the head
  std::size_t head_ = 0;
};

/// PI loop with output saturation and back-calculation anti-windup. The
/// output is sign * (kp * e + ki * integral(e)) clamped to [-u_max, u_max].
struct PiController {
  double kp = 0.28;
  double ki = 1.0;
  double sign = -1.0;
  double u_max = 2.0;

  double step(double error, double dt);
  void reset() { integral_ = 0.0; }

 private:
  double integral_ = 0.0;
};

/// Heading reference that steers toward a waypoint segment, pulling the
/// cross-track error to zero over the lookahead distance.
double los_heading(const Vec2& p, const Vec2& seg_start, const Vec2& seg_end,
                   double lookahead);

/// Closed waypoint loop covering a rectangle with parallel stripes joined by
/// half-turn arcs.
struct LawnmowerPlan {
  std::vector<Vec2> waypoints;  // closed: the last connects back to the first

  std::size_t size() const { return waypoints.size(); }
  const Vec2& segment_start(std::size_t k) const {
    return waypoints[k % waypoints.size()];
  }
  const Vec2& segment_end(std::size_t k) const {
    return waypoints[(k + 1) % waypoints.size()];
  }
  /// Segment whose closest point to p is nearest.
  std::size_t closest_segment(const Vec2& p) const;
};

struct Rect {
  Vec2 min;
  Vec2 max;
};

/// Builds the stripe loop. Stripes run parallel to the longer side, one
/// stripe_width apart, centered across the shorter side; ends are joined by
/// semicircular arcs of half the stripe width, inset so the loop stays in
/// the region. Waypoints are spaced at most `spacing` apart. Throws
/// RegionTooSmall when the region cannot hold the layout.
LawnmowerPlan build_lawnmower(const Rect& region, double stripe_width,
                              double spacing);

/// Advances the active segment while p is within switch_distance of its end;
/// wraps around the loop.
std::size_t advance_waypoint(const Vec2& p, const LawnmowerPlan& plan,
                             std::size_t current, double switch_distance);

}  // namespace covpath
