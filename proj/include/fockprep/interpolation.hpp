#pragma once

#include <vector>

namespace fockprep {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Butland
/// interior slopes, three-point limited end slopes). Monotone data give a
/// monotone interpolant that never leaves the data range. The construction is
/// symmetric under x -> -x, so reversed data interpolate to the mirrored curve.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  /// `x` strictly increasing, at least two points.
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

 private:
  std::size_t interval(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

}  // namespace fockprep
