#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fockprep/model.hpp"

namespace fockprep {

class SpatialGrid;

/// Lowest k eigenpairs of H(lambda) on a grid, energy ordered. States are
/// real, normalized with sum |psi_i|^2 dx = 1, and sign-fixed so the first
/// component with |psi_i| > 1e-8 (scanning from x_min) is positive.
struct EigenSet {
  double lambda = 0.0;
  std::vector<double> energies;
  std::vector<std::vector<double>> states;

  std::size_t k() const { return energies.size(); }
};

struct EigensolveOptions {
  /// Refine the finite-difference eigenpairs against the Fourier-grid
  /// Hamiltonian used by the propagator. Off gives plain second-order
  /// finite differences.
  bool spectral_refinement = true;
  /// Extra seed vectors carried beyond k during refinement.
  std::size_t seed_margin = 6;
  double residual_tol = 1e-8;
  int max_iterations = 40;
  /// Largest weight allowed in the outer 5% bands before the grid is
  /// declared too small.
  double edge_mass_tol = 1e-8;
};

EigenSet eigensolve(const PotentialParams& p, const SpatialGrid& grid, std::size_t k,
                    const EigensolveOptions& options = {});

/// Same, for an arbitrary sampled potential. `lambda` is only recorded.
EigenSet eigensolve_potential(std::span<const double> potential, const SpatialGrid& grid, std::size_t k,
                              double lambda, const EigensolveOptions& options = {});

/// Couplings of state n to its (up to) four nearest levels through
/// dH/dlambda = x^2 + beta'(A) x^4, with lambda = A.
struct NeighborCoupling {
  std::size_t n = 0;
  std::vector<std::size_t> neighbors;  // {n-2, n-1, n+1, n+2} clipped to [0, k-1]
  std::vector<double> couplings;       // |<n|dH/dlambda|m>|
  std::vector<double> gaps;            // E_n - E_m
};

std::vector<std::size_t> neighbor_indices(std::size_t n, std::size_t k);

/// Signed <n|dH/dlambda|m> at lambda = eig.lambda.
double dh_dlambda_element(const EigenSet& eig, const DeformationPath& path, const SpatialGrid& grid,
                          std::size_t n, std::size_t m);

/// Throws DegeneratePairError when some |E_n - E_m| < 1e-14.
NeighborCoupling dh_dlambda_elements(const EigenSet& eig, const DeformationPath& path,
                                     const SpatialGrid& grid, std::size_t n);

struct Localization {
  double mean_x = 0.0;
  double prob_right = 0.0;  // weight on x > 0
};

Localization localization(const EigenSet& eig, const SpatialGrid& grid, std::size_t n);

}  // namespace fockprep
