#pragma once

#include <optional>
#include <span>
#include <vector>

namespace fockprep {

class SpatialGrid;

/// Conversion between SI and the internal units hbar = M = 1, where time is
/// measured in 1/omega_ref and omega_ref = 2 sqrt(-alpha0/M) is the frequency
/// of each well of the initial double well.
class UnitSystem {
 public:
  UnitSystem(double mass_si, double alpha0_si);

  double mass_si() const { return mass_si_; }
  double alpha0_si() const { return alpha0_si_; }
  double omega_ref() const { return omega_ref_; }
  double length_unit() const { return length_unit_; }
  double energy_unit() const { return energy_unit_; }
  double time_unit() const { return 1.0 / omega_ref_; }
  double force_unit() const { return energy_unit_ / length_unit_; }

 private:
  double mass_si_;
  double alpha0_si_;
  double omega_ref_;
  double length_unit_;
  double energy_unit_;
};

/// Coefficients of V(x) = A x^2 + B x^4 + C x in internal units.
struct PotentialParams {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  bool is_double_well() const { return A < 0.0 && B > 0.0; }
  bool is_harmonic() const { return A > 0.0 && B == 0.0; }
};

/// The same coefficients in SI: alpha [N/m], beta [N/m^3], gamma [N].
struct SiPotential {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

PotentialParams to_dimensionless(const SiPotential& si, const UnitSystem& units);
SiPotential to_si(const PotentialParams& p, const UnitSystem& units);

struct WellPair {
  double x_minus = 0.0;
  double x_plus = 0.0;
  double separation = 0.0;  // D
  double omega = 0.0;       // effective frequency of each well
  double delta_v = 0.0;     // energy offset of the right well, C * D
};

/// Closed-form small-bias geometry. A double well fills `wells`; a harmonic
/// trap fills `x_eq` only.
struct WellGeometry {
  std::optional<WellPair> wells;
  std::optional<double> x_eq;
};

WellGeometry geometry(const PotentialParams& p);

struct SmallBiasReport {
  double ratio = 0.0;  // |C| over the small-bias bound
  bool pass = false;
};

inline constexpr double kDefaultRatioMax = 0.1;

SmallBiasReport small_bias_check(const PotentialParams& p, double ratio_max = kDefaultRatioMax);

/// Bias that puts the ground state of the right well at global index n:
/// C = (n - 1/2) Omega0 / D0.
double bias_for_target(int n, double A0, double B0);

/// Upper bound (4/3) sqrt(-A0^3 / B0^2) on the reachable Fock index. Usable
/// targets are well below it (ratio_max times the bound).
double max_target_bound(double A0, double B0);

/// Energy offset between wells in units of the local well quantum,
/// C sqrt(1/(2B)). Independent of A.
double quanta_number(const PotentialParams& p);

std::vector<double> potential_on_grid(const PotentialParams& p, const SpatialGrid& grid);

/// Logistic function 1/(1+exp(-z)), evaluated without overflow.
double logistic(double z);

/// One-parameter family A -> (A, beta(A), C) with beta(A) = B0 S[kappa (A - eps)].
/// kappa < 0 makes beta fall from B0 at A0 to ~0 at Af.
struct DeformationPath {
  double A0 = -0.25;
  double Af = 0.5;
  double B0 = 0.0;
  double kappa = 0.0;
  double eps = 0.0;
  double C = 0.0;
  int n_target = 0;

  double beta(double A) const;
  /// d beta / dA, analytic.
  double dbeta(double A) const;
  PotentialParams at(double A) const { return {A, beta(A), C}; }

  /// Checks the multiplexing boundary conditions (A0 < 0 < Af = 2|A0| and
  /// beta asymptotics at both ends). Throws InvalidArgument.
  void validate_multiplexing() const;
};

double beta_of_alpha(const DeformationPath& path, double A);

}  // namespace fockprep
