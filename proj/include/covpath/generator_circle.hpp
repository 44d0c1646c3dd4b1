#pragma once

#include <vector>

#include "covpath/coverage.hpp"
#include "covpath/qp.hpp"

namespace covpath {

struct CircleGenConfig {
  double r_min = 0.2;
  double r_max = 0.7;
  double gamma = 2.0;     // fleet-level coverage level to certify
  int n_agents = 1;
  double lambda = 0.1;    // slack penalty in the parameter QP
  double alpha1 = 1.0;    // linear class-K slopes, one per barrier
  double alpha2 = 1.0;
  double alpha3 = 1.0;
  double epsilon = 0.0;   // near-optimal direction band (absolute)
  double hysteresis = 0.0;
};

/// Local coverage score of the circular path (r, z, dir) over the assigned
/// points: sum of per-point scores weighted by importance.
double circle_local_score(double r, const Pose& z, Direction dir,
                          const PointSet& ps, double sigma);

DirectionScores circle_direction_scores(double r, const Pose& z,
                                        const PointSet& ps, double sigma);

/// Radius box barriers (b_low, b_high) = (r - r_min, r_max - r).
std::pair<double, double> radius_barriers(double r, double r_min, double r_max);

/// Partial derivatives of the local score. Radius and pose derivatives use
/// central differences; the importance derivatives are the per-point scores
/// themselves.
struct CircleGradients {
  double d_radius = 0.0;
  Vec3 d_pose = Vec3::Zero();  // d/dx, d/dy, d/dheading
  std::vector<double> d_phi;
};

CircleGradients circle_score_gradients(double r, const Pose& z, Direction dir,
                                       const PointSet& ps, double sigma);

/// Turn rate that keeps the vehicle on its circle: sign by turning sense,
/// magnitude speed / r.
double circle_omega_star(double r, Direction dir, double speed);

struct CircleStep {
  double rho = 0.0;    // radius rate to apply
  double slack = 0.0;  // soft-constraint slack
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  DirectionScores scores;
  QpStatus qp = QpStatus::Optimal;
};

/// One parameter update: assembles the certificate and radius-box rows and
/// solves for the radius rate. z_dot is the agent's current velocity
/// (x, y, heading rates).
CircleStep circle_generator_step(double r, const VehicleState& state,
                                 const Vec3& z_dot, const PointSet& ps,
                                 const CircleGenConfig& cfg, double sigma);

}  // namespace covpath
