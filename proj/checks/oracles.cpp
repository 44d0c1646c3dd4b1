#include "oracles.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace covpath::checks {

VehicleState rk4_dubins(const VehicleState& s, double omega, double dt,
                        int substeps) {
  const double v = s.forward_speed;
  const double h = dt / substeps;
  std::array<double, 3> x{s.pose.position.x(), s.pose.position.y(),
                          s.pose.heading};
  const auto deriv = [&](const std::array<double, 3>& y) {
    return std::array<double, 3>{v * std::cos(y[2]), v * std::sin(y[2]), omega};
  };
  for (int k = 0; k < substeps; ++k) {
    const auto k1 = deriv(x);
    std::array<double, 3> tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    const auto k2 = deriv(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    const auto k3 = deriv(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = x[i] + h * k3[i];
    const auto k4 = deriv(tmp);
    for (int i = 0; i < 3; ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  VehicleState out = s;
  out.pose.position = Vec2{x[0], x[1]};
  out.pose.heading = wrap_angle(x[2]);
  out.angular_rate = omega;
  return out;
}

double circle_sampled_distance(const Vec2& c, double r, const Vec2& q,
                               int samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double a = kTwoPi * k / samples;
    const Vec2 p = c + r * Vec2{std::cos(a), std::sin(a)};
    best = std::min(best, (p - q).norm());
  }
  return best;
}

double parametric_ellipse_curvature(double a, double b, double t) {
  const double st = std::sin(t);
  const double ct = std::cos(t);
  return a * b / std::pow(a * a * st * st + b * b * ct * ct, 1.5);
}

double warp_arc_angle(const Vec2& p, const Vec2& c, const Vec3& s,
                      const Vec2& q, Direction dir) {
  const Mat2 S = shape_matrix(s);
  const Vec2 pn = S * (p - c);
  const Vec2 qn = S * (q - c);
  const double ap = std::atan2(pn.y(), pn.x());
  const double aq = std::atan2(qn.y(), qn.x());
  return wrap_two_pi(dir == Direction::Right ? ap - aq : aq - ap);
}

QpSolution enumerate_qp(const QpProblem& problem) {
  const int dim = static_cast<int>(problem.cost_diag.size());
  const int rows = static_cast<int>(problem.constraints.rows());
  const double feas_tol = 1e-8;
  const double mult_tol = 1e-8;

  QpSolution best;
  best.status = QpStatus::Infeasible;
  best.x = Eigen::VectorXd::Zero(dim);
  best.multipliers = Eigen::VectorXd::Zero(rows);
  double best_obj = std::numeric_limits<double>::infinity();

  std::vector<int> subset;
  const auto objective = [&](const Eigen::VectorXd& x) {
    return x.dot(problem.cost_diag.asDiagonal() * x) +
           problem.cost_linear.dot(x);
  };

  const std::function<void()> evaluate = [&]() {
    const int nw = static_cast<int>(subset.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim + nw, dim + nw);
    Eigen::VectorXd rhs(dim + nw);
    kkt.topLeftCorner(dim, dim) =
        (2.0 * problem.cost_diag.array()).matrix().asDiagonal();
    for (int k = 0; k < nw; ++k) {
      kkt.block(0, dim + k, dim, 1) =
          -problem.constraints.row(subset[static_cast<std::size_t>(k)]).transpose();
      kkt.block(dim + k, 0, 1, dim) =
          problem.constraints.row(subset[static_cast<std::size_t>(k)]);
      rhs(dim + k) = problem.lower_bounds(subset[static_cast<std::size_t>(k)]);
    }
    rhs.head(dim) = -problem.cost_linear;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (lu.rank() < dim + nw) return;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(dim);
    for (int k = 0; k < nw; ++k)
      if (sol(dim + k) < -mult_tol) return;  // wrong multiplier sign
    for (int i = 0; i < rows; ++i)
      if (problem.constraints.row(i).dot(x) < problem.lower_bounds(i) - feas_tol)
        return;  // primal infeasible candidate
    const double obj = objective(x);
    if (obj < best_obj) {
      best_obj = obj;
      best.status = QpStatus::Optimal;
      best.x = x;
      best.multipliers = Eigen::VectorXd::Zero(rows);
      for (int k = 0; k < nw; ++k)
        best.multipliers(subset[static_cast<std::size_t>(k)]) =
            std::max(0.0, sol(dim + k));
    }
  };

  const std::function<void(int)> recurse = [&](int from) {
    evaluate();
    if (static_cast<int>(subset.size()) == dim) return;
    for (int i = from; i < rows; ++i) {
      subset.push_back(i);
      recurse(i + 1);
      subset.pop_back();
    }
  };
  recurse(0);
  return best;
}

std::pair<double, double> shape_eigen_range(const Vec3& s) {
  Eigen::SelfAdjointEigenSolver<Mat2> eig(shape_matrix(s));
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigen solve failed");
  return {eig.eigenvalues()(0), eig.eigenvalues()(1)};
}

double richardson_error(const std::function<double(double)>& f, double x,
                        double h) {
  const auto central = [&](double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
  };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  const double extrapolated = (4.0 * d2 - d1) / 3.0;
  const double scale = std::max(std::abs(extrapolated), 1e-12);
  return std::abs(d2 - d1) / scale;
}

double loop_crossover(double kp, double ki, double gain, double pole) {
  const auto magnitude = [&](double w) {
    const double c = std::sqrt(kp * kp + (ki / w) * (ki / w));
    const double g = gain / std::sqrt(w * w + pole * pole);
    return c * g;
  };
  double lo = 1e-3, hi = 1e3;
  if (magnitude(lo) < 1.0 || magnitude(hi) > 1.0)
    throw std::runtime_error("crossover outside bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (magnitude(mid) > 1.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace covpath::checks
