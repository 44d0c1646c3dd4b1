#pragma once

#include <functional>

#include "covpath/coverage.hpp"
#include "covpath/geometry.hpp"
#include "covpath/qp.hpp"

namespace covpath::checks {

/// Classic fourth-order Runge-Kutta integration of the unicycle, used as an
/// independent reference for the closed-form arc stepping.
VehicleState rk4_dubins(const VehicleState& s, double omega, double dt,
                        int substeps);

/// Smallest distance from q to `samples` points placed uniformly on the
/// circle (c, r).
double circle_sampled_distance(const Vec2& c, double r, const Vec2& q,
                               int samples);

/// Curvature of the axis-aligned ellipse (a, b) at parameter angle t.
double parametric_ellipse_curvature(double a, double b, double t);

/// Arc angle computed directly in normalized coordinates: both the agent
/// position and the target are mapped through S, then the angle is read off
/// the unit circle. Independent of any heading identity.
double warp_arc_angle(const Vec2& p, const Vec2& c, const Vec3& s,
                      const Vec2& q, Direction dir);

/// Exhaustive KKT search over all active-set candidates up to the variable
/// count. For a strictly convex QP this finds the unique minimizer whenever
/// the problem is feasible.
QpSolution enumerate_qp(const QpProblem& problem);

/// Eigenvalue range of the packed symmetric shape.
std::pair<double, double> shape_eigen_range(const Vec3& s);

/// Two-step central-difference consistency: returns the relative difference
/// between estimates at h and h/2 against their Richardson extrapolation.
double richardson_error(const std::function<double(double)>& f, double x,
                        double h);

/// First 0 dB crossing of the PI + first-order-plant loop gain.
double loop_crossover(double kp, double ki, double gain, double pole);

}  // namespace covpath::checks
