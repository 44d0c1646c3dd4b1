#pragma once

#include <Eigen/Core>
#include <cmath>

namespace covpath {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Below this magnitude a turn rate is integrated as a straight segment.
inline constexpr double kOmegaTol = 1e-9;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

/// Wraps an angle to [0, 2*pi).
inline double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // fmod may round up to the period
  return w;
}

/// Counterclockwise rotation matrix for angle vartheta.
inline Mat2 rotation(double vartheta) {
  const double c = std::cos(vartheta);
  const double s = std::sin(vartheta);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

inline Vec2 rotate(double vartheta, const Vec2& v) {
  const double c = std::cos(vartheta);
  const double s = std::sin(vartheta);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// Planar pose. The heading is kept wrapped to (-pi, pi].
struct Pose {
  Vec2 position{0.0, 0.0};
  double heading = 0.0;

  Pose() = default;
  Pose(const Vec2& p, double theta) : position(p), heading(wrap_angle(theta)) {}

  Vec2 heading_dir() const { return {std::cos(heading), std::sin(heading)}; }
};

/// Kinematic state of one vehicle: pose, last applied turn rate and the
/// constant surge speed.
struct VehicleState {
  Pose pose;
  double angular_rate = 0.0;
  double forward_speed = 0.26;
};

/// Advances the constant-speed unicycle by dt under a turn rate held constant
/// over the step. Uses the exact circular-arc solution when |omega| exceeds
/// kOmegaTol and the straight-line limit otherwise.
inline VehicleState step_dubins(const VehicleState& s, double omega, double dt) {
  VehicleState out = s;
  const double v = s.forward_speed;
  const double th0 = s.pose.heading;
  const double th1 = th0 + omega * dt;
  if (std::abs(omega) > kOmegaTol) {
    out.pose.position.x() += (v / omega) * (std::sin(th1) - std::sin(th0));
    out.pose.position.y() += (v / omega) * (std::cos(th0) - std::cos(th1));
  } else {
    out.pose.position.x() += v * dt * std::cos(th0);
    out.pose.position.y() += v * dt * std::sin(th0);
  }
  out.pose.heading = wrap_angle(th1);
  out.angular_rate = omega;
  return out;
}

}  // namespace covpath
