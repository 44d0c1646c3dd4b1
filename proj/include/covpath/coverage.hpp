#pragma once

#include <vector>

#include "covpath/field.hpp"
#include "covpath/geometry.hpp"

namespace covpath {

/// Turning sense of a closed path. Right turns clockwise (negative turn
/// rate), left counterclockwise.
enum class Direction { Right, Left };

inline double turn_sign(Direction d) {
  return d == Direction::Right ? -1.0 : 1.0;
}

inline Direction opposite(Direction d) {
  return d == Direction::Right ? Direction::Left : Direction::Right;
}

// Below this distance from a path center the closest path point is undefined.
inline constexpr double kDistTol = 1e-9;

// Schur-complement denominators below this magnitude are treated as zero.
inline constexpr double kDenomTol = 1e-9;

/// Closest point of the circle (c, r) to q. Throws DegeneratePoint when q is
/// within kDistTol of the center.
Vec2 circle_closest_point(const Vec2& c, double r, const Vec2& q);

/// Arc angle travelled from the agent's angular position on circle c (the
/// agent heading theta fixes that position) to the point of the circle
/// closest to q, following the given turning sense. Result lies in [0, 2*pi).
double circle_arc_angle(const Vec2& c, double theta, const Vec2& q,
                        Direction dir);

/// Coverage score of observation point q for an agent at pose z travelling
/// the circle (c, r): sensing performance at the closest path point weighted
/// by the remaining arc 2*pi - psi.
double circle_point_score(const Vec2& c, double r, const Pose& z,
                          const Vec2& q, Direction dir, double sigma);

/// Center of the circle of radius r tangent to the pose: to the agent's
/// right for Right, to its left for Left.
Vec2 circle_center(double r, const Pose& z, Direction dir);

/// Score of observing q from the circular path determined by (r, z, dir).
/// Points within kDistTol of the center fall back to the path point the
/// agent currently occupies.
double circle_path_score(double r, const Pose& z, Direction dir, const Vec2& q,
                         double sigma);

/// Symmetric shape matrix from packed coefficients (s1, s2, s3).
Mat2 shape_matrix(const Vec3& s);

/// True iff shape_matrix(s) is positive definite.
bool shape_is_pd(const Vec3& s);

/// Like shape_matrix but throws NonPdShape when not positive definite.
Mat2 shape_matrix_checked(const Vec3& s);

/// First-order distance of q from the unit-level ellipse (p-c)^T S^2 (p-c)=1.
double sampson_distance(const Vec2& c, const Vec3& s, const Vec2& q);

/// Arc angle for the elliptic path: the angle between the agent and the
/// target directions measured in normalized coordinates x -> S (x - c),
/// where the path maps to a unit circle. Result lies in [0, 2*pi).
double ellipse_arc_angle(const Vec2& c, const Vec3& s, double theta,
                         const Vec2& q, Direction dir);

/// Center of the ellipse with shape S through the pose, tangent to the
/// heading, on the agent's right or left.
Vec2 ellipse_center(const Vec3& s, const Pose& z, Direction dir);

/// Coverage score of q for an agent at pose z travelling the ellipse (c, s).
double ellipse_point_score(const Vec2& c, const Vec3& s, const Pose& z,
                           const Vec2& q, Direction dir, double sigma);

/// Score of observing q from the elliptic path determined by (s, z, dir).
double ellipse_path_score(const Vec3& s, const Pose& z, Direction dir,
                          const Vec2& q, double sigma);

/// Disjoint assignment of observation points to agents by score argmax.
struct Partition {
  std::vector<std::vector<int>> cells;  // point indices per agent, ascending

  int owner_count() const { return static_cast<int>(cells.size()); }
};

/// Assigns every point to the agent with the highest score; ties go to the
/// lowest agent index. scores is n x m (agents by points).
Partition compute_partition(const Eigen::MatrixXd& scores);

/// Sum over points of the best score times importance.
double global_objective(const Eigen::MatrixXd& scores,
                        const std::vector<double>& phi);

/// Same sum decomposed through an explicit partition.
double partition_objective(const Eigen::MatrixXd& scores,
                           const Partition& partition,
                           const std::vector<double>& phi);

/// The slice of the broadcast one agent consumes: its assigned observation
/// points with their importance values and rates, aligned by index.
struct PointSet {
  std::vector<Vec2> points;
  std::vector<double> phi;
  std::vector<double> phi_dot;  // may stay empty when rates are not used
};

/// Local coverage score for each turning sense.
struct DirectionScores {
  double right = 0.0;
  double left = 0.0;

  double at(Direction d) const { return d == Direction::Right ? right : left; }
  double max() const { return right >= left ? right : left; }
  Direction argmax() const {
    return right >= left ? Direction::Right : Direction::Left;
  }
};

/// Keeps the current sense unless the other side wins by more than margin.
Direction select_direction(const DirectionScores& scores, Direction current,
                           double margin);

/// Certificate margin of one agent: best direction score minus its share
/// gamma / n of the fleet target.
double share_barrier(const DirectionScores& scores, double gamma, int n);

/// Directions scoring within epsilon of the best one, right first.
std::vector<Direction> epsilon_active_directions(const DirectionScores& scores,
                                                 double epsilon);

}  // namespace covpath
