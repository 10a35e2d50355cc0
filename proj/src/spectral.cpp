#include "fockprep/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "fockprep/errors.hpp"
#include "fockprep/fourier.hpp"
#include "fockprep/grid.hpp"

namespace fockprep {

namespace {

constexpr double kDegenerateGap = 1e-14;
constexpr double kSignThreshold = 1e-8;
constexpr double kAcceptableResidual = 1e-6;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Column-major n x cols block.
struct Block {
  std::size_t n = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Block() = default;
  Block(std::size_t rows, std::size_t c) : n(rows), cols(c), data(rows * c, 0.0) {}
  std::span<double> col(std::size_t j) { return {data.data() + j * n, n}; }
  std::span<const double> col(std::size_t j) const { return {data.data() + j * n, n}; }
  void push_back(std::span<const double> v) {
    data.insert(data.end(), v.begin(), v.end());
    ++cols;
  }
};

// Second-order finite differences with Dirichlet ends.
struct FdHamiltonian {
  std::vector<double> diag;
  double offdiag = 0.0;
};

FdHamiltonian make_fd(std::span<const double> potential, double dx) {
  FdHamiltonian h;
  h.offdiag = -0.5 / (dx * dx);
  h.diag.resize(potential.size());
  for (std::size_t i = 0; i < potential.size(); ++i) h.diag[i] = 1.0 / (dx * dx) + potential[i];
  return h;
}

Block fd_lowest(const FdHamiltonian& h, std::size_t m, std::vector<double>& values) {
  const auto n = static_cast<lapack_int>(h.diag.size());
  std::vector<double> d = h.diag;
  std::vector<double> e(h.diag.size(), h.offdiag);
  values.assign(h.diag.size(), 0.0);
  Block z(h.diag.size(), m);
  std::vector<lapack_int> support(2 * m);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, static_cast<lapack_int>(m),
                     0.0, &found, values.data(), z.data.data(), n, support.data());
  if (info != 0 || static_cast<std::size_t>(found) != m) {
    throw NumericalError("eigensolve: tridiagonal solver failed (info " + std::to_string(info) + ")");
  }
  values.resize(m);
  return z;
}

// Solves (H_fd - shift) u = rhs in place.
void fd_shifted_solve(const FdHamiltonian& h, double shift, std::span<double> rhs) {
  const std::size_t n = h.diag.size();
  std::vector<double> dl(n - 1, h.offdiag), du(n - 1, h.offdiag), d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = h.diag[i] - shift;
  lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(n), 1, dl.data(), d.data(),
                                  du.data(), rhs.data(), static_cast<lapack_int>(n));
  if (info != 0) {
    // Shift landed on a finite-difference eigenvalue; nudge it.
    std::fill(dl.begin(), dl.end(), h.offdiag);
    std::fill(du.begin(), du.end(), h.offdiag);
    const double nudge = 1e-10 * (1.0 + std::abs(shift));
    for (std::size_t i = 0; i < n; ++i) d[i] = h.diag[i] - shift - nudge;
    info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(n), 1, dl.data(), d.data(), du.data(),
                         rhs.data(), static_cast<lapack_int>(n));
    if (info != 0) throw NumericalError("eigensolve: singular correction system");
  }
}

// Projects v against the columns of q twice and normalizes. Returns false if
// nothing independent is left.
bool orthonormalize_against(const Block& q, std::span<double> v) {
  const double initial = std::sqrt(dot(v, v));
  if (initial == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < q.cols; ++j) {
      const auto c = q.col(j);
      const double proj = dot(c, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * c[i];
    }
  }
  const double norm = std::sqrt(dot(v, v));
  if (norm < 1e-10 * initial) return false;
  for (double& x : v) x /= norm;
  return true;
}

class GridHamiltonian {
 public:
  GridHamiltonian(std::span<const double> potential, const SpatialGrid& grid)
      : potential_(potential), kinetic_(grid) {}

  void apply(std::span<const double> in, std::span<double> out) {
    kinetic_.apply(in, out);
    for (std::size_t i = 0; i < in.size(); ++i) out[i] += potential_[i] * in[i];
  }

 private:
  std::span<const double> potential_;
  SpectralKinetic kinetic_;
};

// Block Davidson refinement with Olsen corrections, preconditioned by the
// finite-difference matrix. Returns Ritz pairs of the Fourier-grid Hamiltonian.
Block refine(std::span<const double> potential, const SpatialGrid& grid, const FdHamiltonian& fd, Block basis,
             std::size_t k, const EigensolveOptions& options, std::vector<double>& values) {
  const std::size_t n = grid.size();
  const std::size_t m = basis.cols;
  GridHamiltonian ham(potential, grid);

  Block hbasis(n, m);
  for (std::size_t j = 0; j < m; ++j) ham.apply(basis.col(j), hbasis.col(j));

  double worst = 0.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const std::size_t b = basis.cols;
    std::vector<double> gram(b * b);
    for (std::size_t j = 0; j < b; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        const double g = 0.5 * (dot(basis.col(i), hbasis.col(j)) + dot(basis.col(j), hbasis.col(i)));
        gram[i + j * b] = g;
        gram[j + i * b] = g;
      }
    }
    std::vector<double> theta(b);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(b), gram.data(),
                                           static_cast<lapack_int>(b), theta.data());
    if (info != 0) throw NumericalError("eigensolve: Rayleigh-Ritz step failed");

    Block ritz(n, m), hritz(n, m);
    for (std::size_t r = 0; r < m; ++r) {
      auto x = ritz.col(r);
      auto hx = hritz.col(r);
      for (std::size_t j = 0; j < b; ++j) {
        const double y = gram[j + r * b];
        if (y == 0.0) continue;
        const auto q = basis.col(j);
        const auto hq = hbasis.col(j);
        for (std::size_t i = 0; i < n; ++i) {
          x[i] += y * q[i];
          hx[i] += y * hq[i];
        }
      }
    }

    worst = 0.0;
    std::vector<std::vector<double>> corrections;
    for (std::size_t r = 0; r < k; ++r) {
      std::vector<double> res(n);
      const auto x = ritz.col(r);
      const auto hx = hritz.col(r);
      for (std::size_t i = 0; i < n; ++i) res[i] = hx[i] - theta[r] * x[i];
      const double norm = std::sqrt(dot(res, res));
      worst = std::max(worst, norm);
      if (norm < options.residual_tol) continue;
      std::vector<double> u = res;
      std::vector<double> v(x.begin(), x.end());
      fd_shifted_solve(fd, theta[r], u);
      fd_shifted_solve(fd, theta[r], v);
      const double eps = dot(x, u) / dot(x, v);
      for (std::size_t i = 0; i < n; ++i) u[i] = eps * v[i] - u[i];
      corrections.push_back(std::move(u));
    }
    if (corrections.empty()) {
      values.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(k));
      return ritz;
    }

    basis = std::move(ritz);
    hbasis = std::move(hritz);
    for (auto& t : corrections) {
      if (!orthonormalize_against(basis, t)) continue;
      std::vector<double> ht(n);
      ham.apply(t, ht);
      basis.push_back(t);
      hbasis.push_back(ht);
    }
    if (basis.cols == m) break;  // no new directions
  }

  if (worst > kAcceptableResidual) {
    throw NumericalError("eigensolve: refinement did not converge (residual " + std::to_string(worst) + ")");
  }
  // Converged to the round-off floor rather than the requested tolerance.
  const std::size_t b = basis.cols;
  std::vector<double> gram(b * b);
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t i = 0; i < b; ++i) gram[i + j * b] = 0.5 * (dot(basis.col(i), hbasis.col(j)) + dot(basis.col(j), hbasis.col(i)));
  std::vector<double> theta(b);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(b), gram.data(), static_cast<lapack_int>(b),
                     theta.data()) != 0) {
    throw NumericalError("eigensolve: Rayleigh-Ritz step failed");
  }
  Block ritz(n, k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < b; ++j) {
      const double y = gram[j + r * b];
      const auto q = basis.col(j);
      auto x = ritz.col(r);
      for (std::size_t i = 0; i < n; ++i) x[i] += y * q[i];
    }
  values.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(k));
  return ritz;
}

void check_confinement(const EigenSet& eig, std::span<const double> potential, const SpatialGrid& grid,
                       double tol) {
  const std::size_t band = grid.edge_band();
  const std::size_t n = grid.size();
  const double top = eig.energies.back();
  if (!(potential.front() > top) || !(potential.back() > top)) {
    throw GridTooSmallError("eigensolve: potential at the grid edges is below E_" +
                            std::to_string(eig.k() - 1) + "; widen the grid");
  }
  for (std::size_t s = 0; s < eig.k(); ++s) {
    const auto& psi = eig.states[s];
    double mass = 0.0;
    for (std::size_t i = 0; i < band; ++i) mass += psi[i] * psi[i] + psi[n - 1 - i] * psi[n - 1 - i];
    mass *= grid.dx();
    if (mass > tol) {
      throw GridTooSmallError("eigensolve: state " + std::to_string(s) + " has weight " + std::to_string(mass) +
                              " in the outer 5% of the grid");
    }
  }
}

}  // namespace

EigenSet eigensolve_potential(std::span<const double> potential, const SpatialGrid& grid, std::size_t k,
                              double lambda, const EigensolveOptions& options) {
  const std::size_t n = grid.size();
  if (potential.size() != n) throw InvalidArgument("eigensolve: potential size does not match grid");
  if (k == 0 || k > n / 4) {
    throw InvalidArgument("eigensolve: need 1 <= k <= n_points/4, got k = " + std::to_string(k));
  }
  for (double v : potential)
    if (!std::isfinite(v)) throw InvalidArgument("eigensolve: non-finite potential");

  const FdHamiltonian fd = make_fd(potential, grid.dx());
  std::vector<double> values;
  Block vectors;
  if (options.spectral_refinement) {
    const std::size_t m = std::min(n / 2, k + options.seed_margin);
    vectors = refine(potential, grid, fd, fd_lowest(fd, m, values), k, options, values);
  } else {
    vectors = fd_lowest(fd, k, values);
  }

  EigenSet eig;
  eig.lambda = lambda;
  eig.energies = values;
  eig.states.resize(k);
  const double scale = 1.0 / std::sqrt(grid.dx());
  for (std::size_t s = 0; s < k; ++s) {
    const auto col = vectors.col(s);
    auto& psi = eig.states[s];
    psi.assign(col.begin(), col.end());
    const double norm = std::sqrt(dot(psi, psi));
    double sign = 1.0;
    for (double v : psi) {
      if (std::abs(v / norm * scale) > kSignThreshold) {
        sign = v > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (double& v : psi) v *= sign * scale / norm;
  }
  check_confinement(eig, potential, grid, options.edge_mass_tol);
  return eig;
}

EigenSet eigensolve(const PotentialParams& p, const SpatialGrid& grid, std::size_t k,
                    const EigensolveOptions& options) {
  const auto v = potential_on_grid(p, grid);
  return eigensolve_potential(v, grid, k, p.A, options);
}

std::vector<std::size_t> neighbor_indices(std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  for (long d : {-2L, -1L, 1L, 2L}) {
    const long m = static_cast<long>(n) + d;
    if (m >= 0 && m < static_cast<long>(k)) out.push_back(static_cast<std::size_t>(m));
  }
  return out;
}

double dh_dlambda_element(const EigenSet& eig, const DeformationPath& path, const SpatialGrid& grid,
                          std::size_t n, std::size_t m) {
  if (n >= eig.k() || m >= eig.k()) throw InvalidArgument("dh_dlambda_element: index outside eigenset");
  const double quartic = path.dbeta(eig.lambda);
  const auto& a = eig.states[n];
  const auto& b = eig.states[m];
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x2 = grid.x(i) * grid.x(i);
    s += a[i] * (x2 + quartic * x2 * x2) * b[i];
  }
  return s * grid.dx();
}

NeighborCoupling dh_dlambda_elements(const EigenSet& eig, const DeformationPath& path, const SpatialGrid& grid,
                                     std::size_t n) {
  if (n >= eig.k()) throw InvalidArgument("dh_dlambda_elements: target outside eigenset");
  NeighborCoupling out;
  out.n = n;
  out.neighbors = neighbor_indices(n, eig.k());
  for (std::size_t m : out.neighbors) {
    const double gap = eig.energies[n] - eig.energies[m];
    if (std::abs(gap) < kDegenerateGap) {
      throw DegeneratePairError("levels " + std::to_string(n) + " and " + std::to_string(m) +
                                " are degenerate at lambda = " + std::to_string(eig.lambda));
    }
    out.couplings.push_back(std::abs(dh_dlambda_element(eig, path, grid, n, m)));
    out.gaps.push_back(gap);
  }
  return out;
}

Localization localization(const EigenSet& eig, const SpatialGrid& grid, std::size_t n) {
  if (n >= eig.k()) throw InvalidArgument("localization: index outside eigenset");
  Localization loc;
  const auto& psi = eig.states[n];
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = psi[i] * psi[i] * grid.dx();
    const double x = grid.x(i);
    loc.mean_x += x * w;
    if (x > 0.0) loc.prob_right += w;
  }
  return loc;
}

}  // namespace fockprep
