#pragma once

#include <vector>

#include "covpath/geometry.hpp"

namespace covpath {

/// Regular grid of observation points covering an axis-aligned rectangle.
/// Points are cell centers, indexed row-major with x fastest.
struct ObservationGrid {
  Vec2 origin{0.0, 0.0};  // lower-left corner of the rectangle
  double cell_size = 0.1;
  int cols = 0;  // cells along x
  int rows = 0;  // cells along y

  /// Grid covering [origin, origin + extent] with square cells. The extent
  /// must be an integer multiple of cell_size up to rounding noise.
  static ObservationGrid from_extent(const Vec2& origin, const Vec2& extent,
                                     double cell_size);

  int size() const { return rows * cols; }

  Vec2 point(int j) const {
    const int iy = j / cols;
    const int ix = j % cols;
    return {origin.x() + (ix + 0.5) * cell_size,
            origin.y() + (iy + 0.5) * cell_size};
  }

  std::vector<Vec2> points() const;
};

/// Gaussian sensing performance of an observer at p for a point q.
double sensing_performance(const Vec2& p, const Vec2& q, double sigma);

/// Time-varying importance value per observation point. Importance grows at
/// gain_up when unobserved and is discharged proportionally to the best
/// sensing performance over the fleet; values stay inside [phi_min, phi_max].
struct ImportanceField {
  std::vector<double> phi;
  double phi_min = 0.0;
  double phi_max = 1.0;
  double gain_up = 0.02;
  double gain_down = 0.5;

  ImportanceField() = default;
  ImportanceField(int count, double initial) : phi(count, initial) {}

  /// Rate of one importance value given the best sensing performance over
  /// all observers. The rate is zeroed when it would push past a bound.
  double rate(double phi_j, double best_f) const {
    double d = gain_up - gain_down * best_f * phi_j;
    if (phi_j >= phi_max && d > 0.0) d = 0.0;
    if (phi_j <= phi_min && d < 0.0) d = 0.0;
    return d;
  }

  /// Rates for every grid point given observer positions.
  std::vector<double> rates(const ObservationGrid& grid,
                            const std::vector<Vec2>& observers,
                            double sigma) const;

  /// Forward-Euler update by precomputed rates, then clamp to the bounds.
  void apply_rates(const std::vector<double>& r, double dt);

  double total() const;
};

/// One forward-Euler step of the whole field.
void step_field(ImportanceField& field, const ObservationGrid& grid,
                const std::vector<Vec2>& observers, double sigma, double dt);

double total_importance(const ImportanceField& field);

}  // namespace covpath
