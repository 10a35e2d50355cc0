#include "fockprep/model.hpp"

#include <cmath>
#include <string>

#include "fockprep/constants.hpp"
#include "fockprep/errors.hpp"
#include "fockprep/grid.hpp"

namespace fockprep {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " is not finite");
}

void require_double_well(const PotentialParams& p, const char* op) {
  if (p.A < 0.0 && p.B <= 0.0) {
    throw RegimeError(std::string(op) + ": A < 0 with B <= 0 gives an unbounded potential");
  }
  if (!p.is_double_well()) {
    throw RegimeError(std::string(op) + ": needs a double well (A < 0, B > 0)");
  }
}

}  // namespace

UnitSystem::UnitSystem(double mass_si, double alpha0_si) : mass_si_(mass_si), alpha0_si_(alpha0_si) {
  require_finite(mass_si, "mass");
  require_finite(alpha0_si, "alpha0");
  if (!(mass_si > 0.0)) throw InvalidArgument("unit system: mass must be positive");
  if (!(alpha0_si < 0.0)) throw InvalidArgument("unit system: alpha0 must be negative");
  omega_ref_ = 2.0 * std::sqrt(-alpha0_si / mass_si);
  length_unit_ = std::sqrt(constants::kHbar / (mass_si * omega_ref_));
  energy_unit_ = constants::kHbar * omega_ref_;
}

PotentialParams to_dimensionless(const SiPotential& si, const UnitSystem& units) {
  require_finite(si.alpha, "alpha");
  require_finite(si.beta, "beta");
  require_finite(si.gamma, "gamma");
  const double L = units.length_unit();
  const double E = units.energy_unit();
  return {si.alpha * L * L / E, si.beta * L * L * L * L / E, si.gamma * L / E};
}

SiPotential to_si(const PotentialParams& p, const UnitSystem& units) {
  require_finite(p.A, "A");
  require_finite(p.B, "B");
  require_finite(p.C, "C");
  const double L = units.length_unit();
  const double E = units.energy_unit();
  return {p.A * E / (L * L), p.B * E / (L * L * L * L), p.C * E / L};
}

WellGeometry geometry(const PotentialParams& p) {
  WellGeometry g;
  if (p.A < 0.0) {
    require_double_well(p, "geometry");
    const double half = std::sqrt(-p.A / (2.0 * p.B));
    const double shift = p.C / (4.0 * p.A);
    WellPair w;
    w.x_minus = -half + shift;
    w.x_plus = half + shift;
    w.separation = std::sqrt(-2.0 * p.A / p.B);
    w.omega = 2.0 * std::sqrt(-p.A);
    w.delta_v = p.C * w.separation;
    g.wells = w;
    return g;
  }
  if (p.is_harmonic()) {
    g.x_eq = -p.C / (2.0 * p.A);
    return g;
  }
  throw RegimeError("geometry: neither a double well (A < 0, B > 0) nor a harmonic trap (A > 0, B = 0)");
}

SmallBiasReport small_bias_check(const PotentialParams& p, double ratio_max) {
  require_double_well(p, "small_bias_check");
  const double bound = 4.0 * std::sqrt(2.0) / 3.0 * std::sqrt(-p.A * p.A * p.A / p.B);
  SmallBiasReport r;
  r.ratio = std::abs(p.C) / bound;
  r.pass = r.ratio <= ratio_max;
  return r;
}

double bias_for_target(int n, double A0, double B0) {
  if (n < 1) throw InvalidArgument("bias_for_target: n must be >= 1 (n = 0 needs no bias)");
  require_double_well({A0, B0, 0.0}, "bias_for_target");
  const double omega0 = 2.0 * std::sqrt(-A0);
  const double d0 = std::sqrt(-2.0 * A0 / B0);
  return (n - 0.5) * omega0 / d0;
}

double max_target_bound(double A0, double B0) {
  require_double_well({A0, B0, 0.0}, "max_target_bound");
  return 4.0 / 3.0 * std::sqrt(-A0 * A0 * A0 / (B0 * B0));
}

double quanta_number(const PotentialParams& p) {
  if (!(p.B > 0.0)) throw RegimeError("quanta_number: needs B > 0");
  return p.C * std::sqrt(1.0 / (2.0 * p.B));
}

std::vector<double> potential_on_grid(const PotentialParams& p, const SpatialGrid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.x(i);
    const double x2 = x * x;
    v[i] = p.A * x2 + p.B * x2 * x2 + p.C * x;
  }
  return v;
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double DeformationPath::beta(double A) const { return B0 * logistic(kappa * (A - eps)); }

double DeformationPath::dbeta(double A) const {
  const double z = kappa * (A - eps);
  // S'(z) = S(z) S(-z)
  return B0 * kappa * logistic(z) * logistic(-z);
}

void DeformationPath::validate_multiplexing() const {
  for (double v : {A0, Af, B0, kappa, eps, C}) require_finite(v, "path parameter");
  if (!(A0 < 0.0 && 0.0 < Af)) throw InvalidArgument("path: need A0 < 0 < Af");
  if (std::abs(Af - 2.0 * std::abs(A0)) > 1e-12 * Af) {
    throw InvalidArgument("path: final frequency must match the wells, Af = 2|A0|");
  }
  if (!(B0 > 0.0)) throw InvalidArgument("path: B0 must be positive");
  if (n_target < 0) throw InvalidArgument("path: n_target must be >= 0");
  const double b_start = beta(A0);
  const double b_end = beta(Af);
  if (!(b_start >= B0 * (1.0 - 1e-6)) || !(b_end <= B0 * 1e-6)) {
    throw InvalidArgument("path: sigmoid too wide, beta does not reach B0 at A0 and 0 at Af");
  }
}

double beta_of_alpha(const DeformationPath& path, double A) { return path.beta(A); }

}  // namespace fockprep
