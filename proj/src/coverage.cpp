#include "covpath/coverage.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "covpath/errors.hpp"

namespace covpath {

namespace {

// Angular position of the agent on its path, measured in the (possibly
// normalized) frame where the path is a circle around c. For a right turn
// the center sits to the agent's right, so the agent is at heading + pi/2.
double agent_path_angle(double heading, Direction dir) {
  return dir == Direction::Right ? heading + 0.5 * kPi : heading - 0.5 * kPi;
}

// Arc from the agent's angular position to the target angle beta, following
// the turning sense: clockwise for right, counterclockwise for left.
double arc_between(double agent_angle, double beta, Direction dir) {
  const double psi =
      dir == Direction::Right ? agent_angle - beta : beta - agent_angle;
  return wrap_two_pi(psi);
}

}  // namespace

Vec2 circle_closest_point(const Vec2& c, double r, const Vec2& q) {
  const Vec2 u = q - c;
  const double d = u.norm();
  if (d <= kDistTol)
    throw DegeneratePoint("observation point coincides with circle center");
  return c + (r / d) * u;
}

double circle_arc_angle(const Vec2& c, double theta, const Vec2& q,
                        Direction dir) {
  const Vec2 u = q - c;
  if (u.norm() <= kDistTol)
    throw DegeneratePoint("arc angle undefined at circle center");
  const double beta = std::atan2(u.y(), u.x());
  return arc_between(agent_path_angle(theta, dir), beta, dir);
}

double circle_point_score(const Vec2& c, double r, const Pose& z,
                          const Vec2& q, Direction dir, double sigma) {
  const Vec2 star = circle_closest_point(c, r, q);
  const double f = sensing_performance(star, q, sigma);
  const double psi = circle_arc_angle(c, z.heading, q, dir);
  return f * (kTwoPi - psi);
}

Vec2 circle_center(double r, const Pose& z, Direction dir) {
  const Vec2 w{std::sin(z.heading), -std::cos(z.heading)};
  return dir == Direction::Right ? Vec2(z.position + r * w)
                                 : Vec2(z.position - r * w);
}

double circle_path_score(double r, const Pose& z, Direction dir, const Vec2& q,
                         double sigma) {
  const Vec2 c = circle_center(r, z, dir);
  if ((q - c).norm() <= kDistTol) {
    // Every path point is equally close; take the agent's own position so
    // the remaining arc is the full period.
    const double f = std::exp(-r * r / (2.0 * sigma * sigma));
    return f * kTwoPi;
  }
  return circle_point_score(c, r, z, q, dir, sigma);
}

Mat2 shape_matrix(const Vec3& s) {
  Mat2 m;
  m << s(0), s(1), s(1), s(2);
  return m;
}

bool shape_is_pd(const Vec3& s) {
  return s(0) > 0.0 && s(0) * s(2) - s(1) * s(1) > 0.0;
}

Mat2 shape_matrix_checked(const Vec3& s) {
  if (!shape_is_pd(s))
    throw NonPdShape("shape matrix is not positive definite");
  return shape_matrix(s);
}

double sampson_distance(const Vec2& c, const Vec3& s, const Vec2& q) {
  const Mat2 S = shape_matrix_checked(s);
  return std::abs((S * (q - c)).norm() - 1.0);
}

double ellipse_arc_angle(const Vec2& c, const Vec3& s, double theta,
                         const Vec2& q, Direction dir) {
  const Mat2 S = shape_matrix_checked(s);
  const Vec2 u = S * (q - c);
  if (u.norm() <= kDistTol)
    throw DegeneratePoint("arc angle undefined at ellipse center");
  // In normalized coordinates the heading direction maps to S * t; the
  // agent sits at right angles to it just as on the circle.
  const Vec2 t = S * Vec2{std::cos(theta), std::sin(theta)};
  const double theta_n = std::atan2(t.y(), t.x());
  const double beta = std::atan2(u.y(), u.x());
  return arc_between(agent_path_angle(theta_n, dir), beta, dir);
}

Vec2 ellipse_center(const Vec3& s, const Pose& z, Direction dir) {
  const Mat2 S = shape_matrix_checked(s);
  const Mat2 S2inv = (S * S).inverse();
  const Vec2 w{std::sin(z.heading), -std::cos(z.heading)};
  const Vec2 off = S2inv * w / std::sqrt(w.dot(S2inv * w));
  return dir == Direction::Right ? Vec2(z.position + off)
                                 : Vec2(z.position - off);
}

double ellipse_point_score(const Vec2& c, const Vec3& s, const Pose& z,
                           const Vec2& q, Direction dir, double sigma) {
  const double d = sampson_distance(c, s, q);
  const double f = std::exp(-d * d / (2.0 * sigma * sigma));
  const double psi = ellipse_arc_angle(c, s, z.heading, q, dir);
  return f * (kTwoPi - psi);
}

double ellipse_path_score(const Vec3& s, const Pose& z, Direction dir,
                          const Vec2& q, double sigma) {
  const Vec2 c = ellipse_center(s, z, dir);
  const Mat2 S = shape_matrix(s);
  if ((S * (q - c)).norm() <= kDistTol) {
    const double f = std::exp(-1.0 / (2.0 * sigma * sigma));
    return f * kTwoPi;
  }
  return ellipse_point_score(c, s, z, q, dir, sigma);
}

Partition compute_partition(const Eigen::MatrixXd& scores) {
  const int n = static_cast<int>(scores.rows());
  const int m = static_cast<int>(scores.cols());
  Partition part;
  part.cells.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < m; ++j) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (scores(i, j) > scores(best, j)) best = i;
    part.cells[static_cast<std::size_t>(best)].push_back(j);
  }
  return part;
}

double global_objective(const Eigen::MatrixXd& scores,
                        const std::vector<double>& phi) {
  double sum = 0.0;
  for (int j = 0; j < scores.cols(); ++j)
    sum += scores.col(j).maxCoeff() * phi[static_cast<std::size_t>(j)];
  return sum;
}

double partition_objective(const Eigen::MatrixXd& scores,
                           const Partition& partition,
                           const std::vector<double>& phi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < partition.cells.size(); ++i)
    for (int j : partition.cells[i])
      sum += scores(static_cast<int>(i), j) * phi[static_cast<std::size_t>(j)];
  return sum;
}

Direction select_direction(const DirectionScores& scores, Direction current,
                           double margin) {
  const Direction alt = opposite(current);
  if (scores.at(alt) > scores.at(current) + margin) return alt;
  return current;
}

double share_barrier(const DirectionScores& scores, double gamma, int n) {
  return scores.max() - gamma / static_cast<double>(n);
}

std::vector<Direction> epsilon_active_directions(const DirectionScores& scores,
                                                 double epsilon) {
  std::vector<Direction> out;
  const double best = scores.max();
  if (best - scores.right <= epsilon) out.push_back(Direction::Right);
  if (best - scores.left <= epsilon) out.push_back(Direction::Left);
  return out;
}

}  // namespace covpath
