#include "fockprep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fockprep/errors.hpp"

namespace fockprep {

SpatialGrid::SpatialGrid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw InvalidArgument("grid: need finite x_min < x_max");
  }
  if (n_points < 16) {
    throw InvalidArgument("grid: need at least 16 points, got " + std::to_string(n_points));
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points);
}

std::vector<double> SpatialGrid::nodes() const {
  std::vector<double> out(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) out[i] = x(i);
  return out;
}

std::size_t SpatialGrid::edge_band() const {
  return std::max<std::size_t>(1, n_points_ / 20);
}

}  // namespace fockprep
