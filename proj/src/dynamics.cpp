#include "fockprep/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "fockprep/errors.hpp"
#include "fockprep/fourier.hpp"
#include "fockprep/schedule.hpp"

namespace fockprep {

namespace {

double overlap_modulus(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                       double dx) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::abs(s) * dx;
}

}  // namespace

Wavefunction::Wavefunction(SpatialGrid grid, std::vector<std::complex<double>> amplitudes)
    : grid_(grid), amp_(std::move(amplitudes)) {
  if (amp_.size() != grid_.size()) throw InvalidArgument("wavefunction: amplitude count does not match grid");
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("wavefunction: cannot normalize");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& a : amp_) a *= scale;
}

Wavefunction Wavefunction::from_real(const SpatialGrid& grid, std::span<const double> values) {
  return Wavefunction(grid, std::vector<std::complex<double>>(values.begin(), values.end()));
}

double Wavefunction::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s * grid_.dx();
}

double Wavefunction::mean_x() const {
  double s = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) s += grid_.x(i) * std::norm(amp_[i]);
  return s * grid_.dx();
}

double Wavefunction::edge_mass() const {
  const std::size_t band = grid_.edge_band();
  const std::size_t n = amp_.size();
  double s = 0.0;
  for (std::size_t i = 0; i < band; ++i) s += std::norm(amp_[i]) + std::norm(amp_[n - 1 - i]);
  return s * grid_.dx();
}

PropagationReport propagate(const Wavefunction& psi0, const PotentialFn& potential, double t_f,
                            const PropagationOptions& options, double omega_max) {
  if (!std::isfinite(t_f) || !(t_f > 0.0)) throw InvalidArgument("propagate: t_f must be positive");
  if (!(options.dt > 0.0)) throw InvalidArgument("propagate: dt must be positive");
  if (options.dt * std::max(1.0, omega_max) > options.max_omega_dt) {
    throw InvalidArgument("propagate: dt too large for the fastest trap frequency");
  }

  const SpatialGrid& grid = psi0.grid();
  const std::size_t n = grid.size();
  const auto steps = static_cast<std::size_t>(std::ceil(t_f / options.dt - 1e-12));
  const double dt = t_f / static_cast<double>(steps);

  // exp(-i k^2/2 tau), with the 1/N of the inverse transform folded in.
  const auto k = wavenumbers(grid);
  std::vector<std::complex<double>> half_kinetic(n), full_kinetic(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double e = 0.5 * k[j] * k[j];
    half_kinetic[j] = std::polar(1.0 / static_cast<double>(n), -0.5 * e * dt);
    full_kinetic[j] = std::polar(1.0 / static_cast<double>(n), -e * dt);
  }
  std::vector<double> x(n), x2(n), x4(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = grid.x(i);
    x2[i] = x[i] * x[i];
    x4[i] = x2[i] * x2[i];
  }

  ComplexFft fft(n);
  auto psi = fft.data();
  std::copy(psi0.amplitudes().begin(), psi0.amplitudes().end(), psi.begin());

  auto state_now = [&] { return Wavefunction(grid, std::vector<std::complex<double>>(psi.begin(), psi.end())); };
  auto raw_norm = [&] {
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return s * grid.dx();
  };
  auto raw_edge = [&] {
    const std::size_t band = grid.edge_band();
    double s = 0.0;
    for (std::size_t i = 0; i < band; ++i) s += std::norm(psi[i]) + std::norm(psi[n - 1 - i]);
    return s * grid.dx();
  };
  auto observe = [&](double t) {
    if (!options.observer) return;
    TrajectoryPoint p;
    p.t = t;
    p.norm = raw_norm();
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) mx += x[i] * std::norm(psi[i]);
    p.mean_x = mx * grid.dx();
    if (options.observe_target) {
      p.fidelity = overlap_modulus(options.observe_target->amplitudes(), psi, grid.dx());
    }
    options.observer(p);
  };

  double drift = 0.0;
  auto checkpoint = [&](double t) {
    const double nrm = raw_norm();
    drift = std::max(drift, std::abs(1.0 - nrm));
    if (!(drift <= options.norm_tol)) {
      throw UnstableStepError("propagate: norm drift " + std::to_string(drift) + " at t = " + std::to_string(t));
    }
    const double edge = raw_edge();
    if (edge > options.edge_mass_tol) {
      throw ReflectionError("propagate: weight " + std::to_string(edge) +
                            " reached the outer 5% of the grid at t = " + std::to_string(t));
    }
  };

  auto kick = [&](const std::vector<std::complex<double>>& phase) {
    fft.forward();
    for (std::size_t j = 0; j < n; ++j) psi[j] *= phase[j];
    fft.backward();
  };

  // Adjacent half kinetic steps are fused unless the state is inspected in
  // between; `lead_done` marks that the next step's leading half is applied.
  observe(0.0);
  bool lead_done = false;
  for (std::size_t s = 0; s < steps; ++s) {
    if (!lead_done) kick(half_kinetic);

    const PotentialParams p = potential((static_cast<double>(s) + 0.5) * dt);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = p.A * x2[i] + p.B * x4[i] + p.C * x[i];
      psi[i] *= std::polar(1.0, -v * dt);
    }

    const std::size_t done = s + 1;
    const bool observe_now = options.observer && done % options.observe_every == 0;
    const bool check_now = done % options.checkpoint_every == 0 || done == steps;
    if (observe_now || check_now) {
      kick(half_kinetic);
      lead_done = false;
      if (observe_now) observe(static_cast<double>(done) * dt);
      if (check_now) checkpoint(static_cast<double>(done) * dt);
    } else {
      kick(full_kinetic);
      lead_done = true;
    }
  }

  PropagationReport report{state_now(), drift, steps, dt};
  return report;
}

PropagationReport propagate(const Wavefunction& psi0, const Schedule& s, const PropagationOptions& options) {
  return propagate(
      psi0, [&s](double t) { return s.params_at(t); }, s.t_f(), options, max_trap_frequency(s));
}

double max_trap_frequency(const Schedule& s) {
  double w = 1.0;
  for (double a : s.alphas()) {
    const auto p = s.path().at(a);
    if (p.A < 0.0) {
      w = std::max(w, 2.0 * std::sqrt(-p.A));
    } else {
      w = std::max(w, std::sqrt(2.0 * p.A));
    }
  }
  return w;
}

double fidelity(const Wavefunction& psi, const Wavefunction& target) {
  if (!(psi.grid() == target.grid())) throw InvalidArgument("fidelity: wavefunctions live on different grids");
  return overlap_modulus(target.amplitudes(), psi.amplitudes(), psi.grid().dx());
}

double superposition_fidelity(double f0, double fn) {
  if (!(f0 >= 0.0 && f0 <= 1.0 + 1e-12) || !(fn >= 0.0 && fn <= 1.0 + 1e-12)) {
    throw InvalidArgument("superposition_fidelity: inputs must lie in [0, 1]");
  }
  return 0.5 * (f0 + fn);
}

std::function<void(const TrajectoryPoint&)> trajectory_csv(std::ostream& out) {
  out << "t,norm,mean_x,fidelity\n";
  return [&out](const TrajectoryPoint& p) {
    out << std::setprecision(12) << p.t << "," << p.norm << "," << p.mean_x << "," << p.fidelity << "\n";
  };
}

}  // namespace fockprep
