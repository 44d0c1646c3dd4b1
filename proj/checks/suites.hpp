#pragma once

#include <string>
#include <vector>

namespace covpath::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Fleet-certificate property: whenever every per-agent barrier is
/// nonnegative under a random disjoint assignment, the global objective
/// reaches the certified level (circle and ellipse scoring).
CheckResult check_certificate_property();

/// Closest-point, ellipse-center and curvature constructions against dense
/// sampling and parametric oracles.
CheckResult check_geometry_oracles();

/// Richardson consistency of every finite-difference gradient entering the
/// generator QPs, plus the pool gradient against finite differences.
CheckResult check_gradients();

/// Active-set solver against exhaustive KKT enumeration on random programs.
CheckResult check_qp_solver();

/// Schur barriers nonnegative iff shape eigenvalues inside the box.
CheckResult check_shape_equivalence();

/// Step tracking and loop crossover of the PI + identified yaw model.
CheckResult check_actuator_loop();

/// All of the above, in order.
std::vector<CheckResult> run_fast_checks();

}  // namespace covpath::checks
