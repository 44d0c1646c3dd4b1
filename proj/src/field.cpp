#include "covpath/field.hpp"

#include <cmath>
#include <numeric>

#include "covpath/errors.hpp"

namespace covpath {

ObservationGrid ObservationGrid::from_extent(const Vec2& origin,
                                             const Vec2& extent,
                                             double cell_size) {
  if (cell_size <= 0.0) throw ConfigError("grid cell size must be positive");
  if (extent.x() <= 0.0 || extent.y() <= 0.0)
    throw ConfigError("grid extent must be positive");
  ObservationGrid g;
  g.origin = origin;
  g.cell_size = cell_size;
  g.cols = static_cast<int>(std::llround(extent.x() / cell_size));
  g.rows = static_cast<int>(std::llround(extent.y() / cell_size));
  if (g.cols < 1 || g.rows < 1)
    throw ConfigError("grid extent smaller than one cell");
  if (std::abs(g.cols * cell_size - extent.x()) > 1e-9 ||
      std::abs(g.rows * cell_size - extent.y()) > 1e-9)
    throw ConfigError("grid extent is not a whole number of cells");
  return g;
}

std::vector<Vec2> ObservationGrid::points() const {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int j = 0; j < size(); ++j) out.push_back(point(j));
  return out;
}

double sensing_performance(const Vec2& p, const Vec2& q, double sigma) {
  const double d2 = (p - q).squaredNorm();
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

std::vector<double> ImportanceField::rates(const ObservationGrid& grid,
                                           const std::vector<Vec2>& observers,
                                           double sigma) const {
  std::vector<double> out(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const Vec2 q = grid.point(static_cast<int>(j));
    double best = 0.0;
    for (const Vec2& p : observers)
      best = std::max(best, sensing_performance(p, q, sigma));
    out[j] = rate(phi[j], best);
  }
  return out;
}

void ImportanceField::apply_rates(const std::vector<double>& r, double dt) {
  for (std::size_t j = 0; j < phi.size(); ++j) {
    double v = phi[j] + dt * r[j];
    if (v > phi_max) v = phi_max;
    if (v < phi_min) v = phi_min;
    phi[j] = v;
  }
}

void step_field(ImportanceField& field, const ObservationGrid& grid,
                const std::vector<Vec2>& observers, double sigma, double dt) {
  field.apply_rates(field.rates(grid, observers, sigma), dt);
}

double ImportanceField::total() const {
  return std::accumulate(phi.begin(), phi.end(), 0.0);
}

double total_importance(const ImportanceField& field) { return field.total(); }

}  // namespace covpath
