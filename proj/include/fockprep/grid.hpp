#pragma once

#include <cstddef>
#include <vector>

namespace fockprep {

/// Uniform periodic-style grid: nodes x_i = x_min + i dx, i = 0..n_points-1,
/// dx = (x_max - x_min) / n_points.
class SpatialGrid {
 public:
  SpatialGrid(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_points_; }
  double dx() const { return dx_; }
  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
  std::vector<double> nodes() const;

  /// Number of nodes in each outer band used by the confinement guards
  /// (5% of the grid on each side).
  std::size_t edge_band() const;

  bool operator==(const SpatialGrid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dx_;
};

}  // namespace fockprep
