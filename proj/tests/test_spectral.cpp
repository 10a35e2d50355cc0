#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "fockprep/errors.hpp"
#include "fockprep/experiments.hpp"
#include "fockprep/grid.hpp"
#include "fockprep/spectral.hpp"

using namespace fockprep;

namespace {

// Dense sinc-DVR Hamiltonian on [x_min, x_max] with n interior points,
// diagonalized by Eigen. Independent of the FFT and finite-difference code.
struct DenseOracle {
  std::vector<double> x;
  Eigen::VectorXd energies;
  Eigen::MatrixXd states;  // columns, normalized with dx
  double dx = 0.0;
};

DenseOracle dense_sinc_dvr(const PotentialParams& p, double x_min, double x_max, int n) {
  DenseOracle o;
  o.dx = (x_max - x_min) / n;
  Eigen::MatrixXd h(n, n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    const double x = x_min + i * o.dx;
    o.x.push_back(x);
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        h(i, j) = pi * pi / (6 * o.dx * o.dx) + p.A * x * x + p.B * x * x * x * x + p.C * x;
      } else {
        const int d = i - j;
        h(i, j) = ((d % 2 == 0) ? 1.0 : -1.0) / (o.dx * o.dx * d * d);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  o.energies = solver.eigenvalues();
  o.states = solver.eigenvectors() / std::sqrt(o.dx);
  return o;
}

double gram(const EigenSet& e, std::size_t a, std::size_t b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.states[a].size(); ++i) s += e.states[a][i] * e.states[b][i];
  return s * dx;
}

void check_eigenset_invariants(const EigenSet& e, const SpatialGrid& grid) {
  for (std::size_t j = 0; j + 1 < e.k(); ++j) CHECK(e.energies[j] < e.energies[j + 1]);
  for (std::size_t a = 0; a < e.k(); ++a) {
    CHECK(std::abs(gram(e, a, a, grid.dx()) - 1.0) < 1e-10);
    for (std::size_t b = a + 1; b < e.k(); ++b) CHECK(std::abs(gram(e, a, b, grid.dx())) < 1e-8);
    for (double v : e.states[a]) {
      if (std::abs(v) > 1e-8) {
        CHECK(v > 0.0);
        break;
      }
    }
  }
}

const DeformationPath kFlat{-0.25, 0.5, 1.0 / 512, -133.0, 0.05, 0.0, 0};

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("harmonic spectrum") {
  const SpatialGrid grid(-12.0, 12.0, 1024);
  const auto e = eigensolve({0.5, 0.0, 0.0}, grid, 21);
  REQUIRE(e.k() == 21);
  for (std::size_t j = 0; j <= 20; ++j) CHECK(std::abs(e.energies[j] - (j + 0.5)) / (j + 0.5) < 1e-6);
  check_eigenset_invariants(e, grid);
  CHECK(e.lambda == 0.5);
}

TEST_CASE("plain finite differences are second order") {
  EigensolveOptions fd;
  fd.spectral_refinement = false;
  const auto coarse = eigensolve({0.5, 0.0, 0.0}, SpatialGrid(-12.0, 12.0, 512), 6, fd);
  const auto fine = eigensolve({0.5, 0.0, 0.0}, SpatialGrid(-12.0, 12.0, 1024), 6, fd);
  for (std::size_t j = 0; j < 6; ++j) {
    const double ec = std::abs(coarse.energies[j] - (j + 0.5));
    const double ef = std::abs(fine.energies[j] - (j + 0.5));
    CHECK(ec / ef == doctest::Approx(4.0).epsilon(0.02));
  }
}

TEST_CASE("quartic scaling") {
  const SpatialGrid grid(-12.0, 12.0, 1024);
  const double b = 0.05;
  const auto e1 = eigensolve({0.0, b, 0.0}, grid, 8);
  const auto e8 = eigensolve({0.0, 8 * b, 0.0}, grid, 8);
  for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(e8.energies[j] / e1.energies[j] - 2.0) < 1e-4);
}

TEST_CASE("gap exponent at A = 0") {
  const SpatialGrid grid(-40.0, 40.0, 2048);
  const double b0 = 1.0 / 512;
  std::vector<double> lb, lg;
  for (double b : {b0, 8 * b0, 64 * b0}) {
    const auto e = eigensolve({0.0, b, 0.0}, grid, 3);
    lb.push_back(std::log(b));
    lg.push_back(std::log(e.energies[1] - e.energies[0]));
  }
  const double mb = (lb[0] + lb[1] + lb[2]) / 3, mg = (lg[0] + lg[1] + lg[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lb[i] - mb) * (lg[i] - mg);
    sxx += (lb[i] - mb) * (lb[i] - mb);
  }
  CHECK(std::abs(sxy / sxx - 1.0 / 3.0) < 1e-3);
}

TEST_CASE("mini double well against a dense oracle") {
  const auto preset = mini_preset(2);
  const auto p = preset.path.at(preset.path.A0);
  const auto e = eigensolve(p, preset.grid, 6);
  check_eigenset_invariants(e, preset.grid);

  const auto oracle = dense_sinc_dvr(p, preset.grid.x_min(), preset.grid.x_max(), 2 * static_cast<int>(preset.grid.size()));
  for (std::size_t j = 0; j < 6; ++j) CHECK(e.energies[j] == doctest::Approx(oracle.energies(j)).epsilon(1e-9));

  double oracle_right = 0.0, oracle_mean = 0.0;
  for (std::size_t i = 0; i < oracle.x.size(); ++i) {
    const double w = oracle.states(i, 2) * oracle.states(i, 2) * oracle.dx;
    oracle_mean += w * oracle.x[i];
    if (oracle.x[i] > 0) oracle_right += w;
  }
  CHECK(oracle_right > 0.99);
  CHECK(oracle_mean > 0.0);

  const auto loc = localization(e, preset.grid, 2);
  CHECK(loc.prob_right > 0.99);
  CHECK(loc.mean_x > 0.0);
  CHECK(loc.prob_right == doctest::Approx(oracle_right).epsilon(1e-8));
  CHECK(loc.mean_x == doctest::Approx(oracle_mean).epsilon(1e-8));
  // Levels below the target sit in the lower (left) well.
  CHECK(localization(e, preset.grid, 0).prob_right < 0.01);
  CHECK(localization(e, preset.grid, 1).prob_right < 0.01);
}

TEST_CASE("grid refinement changes energies by less than 1e-6") {
  const auto preset = mini_preset(2);
  const SpatialGrid fine(preset.grid.x_min(), preset.grid.x_max(), 2 * preset.grid.size());
  for (double a : {preset.path.A0, -0.1, 0.0, 0.05, preset.path.Af}) {
    const auto p = preset.path.at(a);
    const auto coarse = eigensolve(p, preset.grid, preset.profile_k());
    const auto refined = eigensolve(p, fine, preset.profile_k());
    for (std::size_t j = 0; j < coarse.k(); ++j)
      CHECK(std::abs(coarse.energies[j] - refined.energies[j]) / std::abs(refined.energies[j]) < 1e-6);
  }
}

TEST_CASE("tunneling doublet in the symmetric mini well") {
  const auto preset = mini_preset(2);
  const auto e = eigensolve({preset.path.A0, preset.path.B0, 0.0}, preset.grid, 4);
  CHECK((e.energies[1] - e.energies[0]) / (e.energies[2] - e.energies[0]) < 0.05);
}

TEST_CASE("symmetric doublet states are delocalized") {
  // Wells 8 apart, 2 quanta deep: the splitting (~2e-4) is resolvable. In the
  // mini well it is below 1e-11 and the doublet is degenerate in double precision.
  const SpatialGrid grid(-20.0, 20.0, 512);
  const auto e = eigensolve({-0.25, 1.0 / 128, 0.0}, grid, 4);
  CHECK(e.energies[1] - e.energies[0] > 1e-5);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(localization(e, grid, j).prob_right - 0.5) < 1e-3);
    CHECK(std::abs(localization(e, grid, j).mean_x) < 1e-10);
  }
}

TEST_CASE("harmonic couplings follow the ladder algebra") {
  const SpatialGrid grid(-12.0, 12.0, 1024);
  auto e = eigensolve({0.5, 0.0, 0.0}, grid, 12);
  e.lambda = 0.4;  // far from the sigmoid step: beta' ~ 0
  for (std::size_t n = 0; n + 2 < 12; ++n) {
    const double expect = std::sqrt((n + 1.0) * (n + 2.0)) / 2.0;
    CHECK(std::abs(std::abs(dh_dlambda_element(e, kFlat, grid, n, n + 2)) - expect) < 1e-6);
    CHECK(std::abs(dh_dlambda_element(e, kFlat, grid, n, n + 1)) < 1e-10);
  }
}

TEST_CASE("coupling symmetry and parity") {
  const auto preset = mini_preset(2);
  auto e = eigensolve({preset.path.A0, 1.0 / 128, 0.0}, preset.grid, 8);
  for (std::size_t n = 0; n < 8; ++n)
    for (std::size_t m = 0; m < 8; ++m) {
      const double nm = dh_dlambda_element(e, preset.path, preset.grid, n, m);
      const double mn = dh_dlambda_element(e, preset.path, preset.grid, m, n);
      CHECK(std::abs(nm - mn) < 1e-12 * std::max(1.0, std::abs(nm)));
    }
  // Low doublets: states 0,2 even and 1,3 odd.
  CHECK(std::abs(dh_dlambda_element(e, preset.path, preset.grid, 0, 1)) < 1e-10);
  CHECK(std::abs(dh_dlambda_element(e, preset.path, preset.grid, 2, 3)) < 1e-10);
  CHECK(std::abs(dh_dlambda_element(e, preset.path, preset.grid, 0, 3)) < 1e-10);
}

TEST_CASE("neighbor sets") {
  using V = std::vector<std::size_t>;
  CHECK(neighbor_indices(0, 6) == V{1, 2});
  CHECK(neighbor_indices(1, 6) == V{0, 2, 3});
  CHECK(neighbor_indices(2, 6) == V{0, 1, 3, 4});
  CHECK(neighbor_indices(5, 6) == V{3, 4});

  const auto preset = mini_preset(2);
  const auto e = eigensolve(preset.path.at(-0.1), preset.grid, 5);
  const auto nc = dh_dlambda_elements(e, preset.path, preset.grid, 2);
  CHECK(nc.neighbors == V{0, 1, 3, 4});
  REQUIRE(nc.couplings.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(nc.couplings[i] >= 0.0);
    CHECK(nc.gaps[i] == e.energies[2] - e.energies[nc.neighbors[i]]);
    CHECK(nc.couplings[i] == std::abs(dh_dlambda_element(e, preset.path, preset.grid, 2, nc.neighbors[i])));
  }

  auto degenerate = e;
  degenerate.energies[3] = degenerate.energies[2];
  CHECK_THROWS_AS(dh_dlambda_elements(degenerate, preset.path, preset.grid, 2), DegeneratePairError);
}

TEST_CASE("displaced final oscillator") {
  const SpatialGrid grid(-20.0, 20.0, 512);
  const PotentialParams p{0.5, 0.0, 0.09375};
  const double x_eq = -p.C / (2 * p.A);
  const auto e = eigensolve(p, grid, 5);
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(std::abs(localization(e, grid, n).mean_x - x_eq) < 1e-6);
    CHECK(e.energies[n] == doctest::Approx(n + 0.5 - p.C * p.C / (4 * p.A)).epsilon(1e-10));
  }
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(eigensolve({0.5, 0.0, 0.0}, SpatialGrid(-3.0, 3.0, 256), 6), GridTooSmallError);
  CHECK_THROWS_AS(eigensolve({0.5, 0.0, 0.0}, SpatialGrid(-12.0, 12.0, 64), 17), InvalidArgument);
  CHECK_THROWS_AS(eigensolve({0.5, 0.0, 0.0}, SpatialGrid(-12.0, 12.0, 64), 0), InvalidArgument);
  CHECK_THROWS_AS(SpatialGrid(1.0, -1.0, 64), InvalidArgument);
  CHECK_THROWS_AS(SpatialGrid(-1.0, 1.0, 8), InvalidArgument);
  const SpatialGrid g(-1.0, 1.0, 100);
  CHECK(g.dx() == doctest::Approx(0.02));
  CHECK(g.x(99) == doctest::Approx(0.98));
  CHECK(g.edge_band() == 5);
}

}  // TEST_SUITE
