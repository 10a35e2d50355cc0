#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fockprep/grid.hpp"
#include "fockprep/model.hpp"

namespace fockprep {

class Schedule;

/// Complex amplitudes on a grid, normalized so that sum |psi_i|^2 dx = 1.
class Wavefunction {
 public:
  /// Normalizes the amplitudes; throws if they are all zero.
  Wavefunction(SpatialGrid grid, std::vector<std::complex<double>> amplitudes);
  static Wavefunction from_real(const SpatialGrid& grid, std::span<const double> values);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const std::complex<double>> amplitudes() const { return amp_; }
  std::span<std::complex<double>> amplitudes() { return amp_; }

  double norm() const;
  double mean_x() const;
  /// Weight in the outer 5% bands of the grid.
  double edge_mass() const;

 private:
  SpatialGrid grid_;
  std::vector<std::complex<double>> amp_;
};

struct TrajectoryPoint {
  double t = 0.0;
  double norm = 0.0;
  double mean_x = 0.0;
  double fidelity = 0.0;  // to the observer's target, 0 when none
};

struct PropagationOptions {
  double dt = 0.005;
  /// Norm and edge checks every this many steps (and at the end).
  std::size_t checkpoint_every = 1000;
  double norm_tol = 1e-8;
  double edge_mass_tol = 1e-6;
  /// Largest accepted omega_max * dt.
  double max_omega_dt = 0.25;
  /// Optional trajectory sampling every `observe_every` steps.
  std::function<void(const TrajectoryPoint&)> observer;
  std::size_t observe_every = 100;
  const Wavefunction* observe_target = nullptr;
};

struct PropagationReport {
  Wavefunction final_state;
  double norm_drift = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
};

/// Potential coefficients as a function of time.
using PotentialFn = std::function<PotentialParams(double)>;

/// Strang split-operator integration over [0, t_f]: half kinetic step in
/// momentum space, full potential step at the midpoint time, half kinetic
/// step. Uses ceil(t_f / dt) equal steps so the run lands on t_f and the step
/// grid is symmetric under time reversal.
PropagationReport propagate(const Wavefunction& psi0, const PotentialFn& potential, double t_f,
                            const PropagationOptions& options, double omega_max = 1.0);

PropagationReport propagate(const Wavefunction& psi0, const Schedule& s, const PropagationOptions& options);

/// Largest instantaneous trap frequency along the schedule (well frequency
/// 2 sqrt(-A) or harmonic sqrt(2A)), at least 1.
double max_trap_frequency(const Schedule& s);

/// |<target|psi>|, the modulus of the overlap.
double fidelity(const Wavefunction& psi, const Wavefunction& target);

/// (F0 + Fn) / 2, the best fidelity to (|0> + e^{i phi} |n>)/sqrt(2) over phi.
double superposition_fidelity(double f0, double fn);

/// Writes "t,norm,mean_x,fidelity" rows and returns an observer that appends
/// to `out`.
std::function<void(const TrajectoryPoint&)> trajectory_csv(std::ostream& out);

}  // namespace fockprep
