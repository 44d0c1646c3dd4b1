#pragma once

#include "covpath/geometry.hpp"
#include "covpath/qp.hpp"

namespace covpath {

/// Smooth superelliptic model of the workspace walls. The interior is
/// mu(p) < 1 where mu is a fourth-order polynomial in the offsets from the
/// pool center.
struct PoolShape {
  Vec2 center{0.0, 0.0};
  Mat2 weight = Mat2::Identity();  // positive definite

  /// Axis-aligned pool with the given half extents; margin shrinks the
  /// usable half extents before the quartic weights are formed.
  static PoolShape axis_aligned(const Vec2& center, const Vec2& half_extent,
                                double margin);
};

/// mu(p) = ((p-o) o (p-o))^T  P  ((p-o) o (p-o)), o = elementwise square.
double pool_mu(const PoolShape& pool, const Vec2& p);

/// Gradient of pool_mu.
Vec2 pool_mu_gradient(const PoolShape& pool, const Vec2& p);

/// Body-frame probe point expressed in world coordinates.
Vec2 probe_world(const Pose& z, const Vec2& probe_body);

/// Wall barrier 1 - mu at a body probe point; nonnegative inside the pool.
double pool_barrier(const PoolShape& pool, const Pose& z,
                    const Vec2& probe_body);

/// Probe points rigidly attached to the hull, ahead of the turning axis.
struct BodyProbePoints {
  Vec2 right{0.25, -0.15};
  Vec2 left{0.25, 0.15};
};

struct SafetyConfig {
  double alpha_right = 0.15;
  double alpha_left = 0.15;
  double lambda_ca = 200.0;  // slack penalty on the left-probe row
};

struct FilterResult {
  double omega_ref = 0.0;
  double slack = 0.0;
  double b_right = 0.0;
  double b_left = 0.0;
  bool fallback = false;  // filter QP infeasible, omega_star passed through
};

/// Minimally alters the requested turn rate so the right probe point cannot
/// leave the pool (hard row) while discouraging the left probe from doing so
/// (soft row).
FilterResult filter_omega(const VehicleState& state, double omega_star,
                          const PoolShape& pool, const BodyProbePoints& probes,
                          const SafetyConfig& cfg);

}  // namespace covpath
