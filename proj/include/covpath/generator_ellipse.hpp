#pragma once

#include <vector>

#include "covpath/coverage.hpp"
#include "covpath/qp.hpp"

namespace covpath {

struct EllipseGenConfig {
  double s_min = 0.5;   // smallest admissible semi-axis
  double s_max = 1.2;   // largest admissible semi-axis
  double gamma = 10.0;
  int n_agents = 1;
  double lambda = 0.1;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double alpha3 = 1.0;
  double alpha4 = 1.0;
  double alpha5 = 1.0;
  double epsilon = 0.0;
  double hysteresis = 0.0;
  // Trust region on each shape coefficient rate. The summed score drops by a
  // full period's worth whenever a point slips behind the agent, so its
  // gradient can spike without bound; capped rates keep one Euler step from
  // leaving the region where the barrier rows mean anything.
  double rate_max = 5.0;
};

/// Schur-complement barriers pinning the shape eigenvalues into
/// [1/s_max, 1/s_min] (semi-axes into [s_min, s_max]). All four nonnegative
/// iff the bounds hold. Throws DegenerateShape when a complement denominator
/// vanishes with a nonzero off-diagonal term.
struct ShapeBarriers {
  double b2 = 0.0;  // 1/s_min - s1
  double b3 = 0.0;  // Schur complement of the upper bound
  double b4 = 0.0;  // s1 - 1/s_max
  double b5 = 0.0;  // Schur complement of the lower bound
};

ShapeBarriers shape_barriers(const Vec3& s, double s_min, double s_max);

double ellipse_local_score(const Vec3& s, const Pose& z, Direction dir,
                           const PointSet& ps, double sigma);

DirectionScores ellipse_direction_scores(const Vec3& s, const Pose& z,
                                         const PointSet& ps, double sigma);

struct EllipseGradients {
  Vec3 d_shape = Vec3::Zero();
  Vec3 d_pose = Vec3::Zero();
  std::vector<double> d_phi;
};

EllipseGradients ellipse_score_gradients(const Vec3& s, const Pose& z,
                                         Direction dir, const PointSet& ps,
                                         double sigma);

/// Signed curvature magnitude of the ellipse (c, s) at a point p on it,
/// computed through the principal-axis parametrization.
double ellipse_curvature(const Vec2& p, const Vec2& c, const Vec3& s);

/// Turn rate that keeps the vehicle on its ellipse at its current point.
double ellipse_omega_star(const Pose& z, const Vec2& c, const Vec3& s,
                          Direction dir, double speed);

struct EllipseStep {
  Vec3 rho = Vec3::Zero();  // shape coefficient rates
  double slack = 0.0;
  double b1 = 0.0;
  ShapeBarriers shape;
  DirectionScores scores;
  QpStatus qp = QpStatus::Optimal;
};

/// One shape update: certificate soft rows plus the four eigenvalue-box
/// hard rows, solved for the shape rates.
EllipseStep ellipse_generator_step(const Vec3& s, const VehicleState& state,
                                   const Vec3& z_dot, const PointSet& ps,
                                   const EllipseGenConfig& cfg, double sigma);

}  // namespace covpath
