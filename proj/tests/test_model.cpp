#include <doctest.h>

#include <cmath>

#include "fockprep/constants.hpp"
#include "fockprep/errors.hpp"
#include "fockprep/experiments.hpp"
#include "fockprep/grid.hpp"
#include "fockprep/model.hpp"

using namespace fockprep;
using namespace fockprep::constants;

namespace {

// Reference values below were evaluated once with 30-digit arithmetic
// (mpmath) from hbar = 1.054571818e-34 J s, u = 1.660539067e-27 kg.
constexpr double kBeMass = 9.012 * kAtomicMassUnit;
constexpr double kAlpha0 = -4.7e-12;
constexpr double kBeta0 = 0.052;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("model") {

TEST_CASE("unit system of the Be-9 trap") {
  const UnitSystem u(kBeMass, kAlpha0);
  CHECK(rel(u.omega_ref() / (2 * kPi), 5.641101525e6) < 1e-8);
  CHECK(rel(u.length_unit(), 1.41003875e-8) < 1e-8);
  CHECK(rel(u.energy_unit(), 3.737833444e-27) < 1e-8);
  CHECK(u.time_unit() == doctest::Approx(1.0 / u.omega_ref()));
  CHECK(u.force_unit() == doctest::Approx(u.energy_unit() / u.length_unit()));
  CHECK_THROWS_AS(UnitSystem(kBeMass, 1e-12), InvalidArgument);
  CHECK_THROWS_AS(UnitSystem(-1.0, kAlpha0), InvalidArgument);
}

TEST_CASE("initial quadratic coefficient is -1/4 for any trap") {
  for (double m : {kBeMass, 40 * kAtomicMassUnit, 1e-25}) {
    for (double a0 : {kAlpha0, -1e-9, -3.3e-14}) {
      const UnitSystem u(m, a0);
      CHECK(std::abs(to_dimensionless({a0, 0, 0}, u).A + 0.25) < 1e-12);
      CHECK(std::abs(to_dimensionless({-2 * a0, 0, 0}, u).A - 0.5) < 1e-12);
    }
  }
}

TEST_CASE("SI round trip and quartic coefficient") {
  const UnitSystem u(kBeMass, kAlpha0);
  const SiPotential si{kAlpha0, kBeta0, 9.73e-22};
  const auto p = to_dimensionless(si, u);
  CHECK(rel(p.B, 5.499302260e-7) < 1e-8);
  const auto back = to_si(p, u);
  CHECK(rel(back.alpha, si.alpha) < 1e-12);
  CHECK(rel(back.beta, si.beta) < 1e-12);
  CHECK(rel(back.gamma, si.gamma) < 1e-12);
  CHECK_THROWS_AS(to_dimensionless({NAN, 0, 0}, u), InvalidArgument);
}

TEST_CASE("well separation and frequency in SI") {
  const UnitSystem u(kBeMass, kAlpha0);
  const auto p = to_dimensionless({kAlpha0, kBeta0, 0}, u);
  const auto g = geometry(p);
  REQUIRE(g.wells);
  const double d_si = g.wells->separation * u.length_unit();
  CHECK(rel(d_si, 13.44504484e-6) < 1e-8);
  CHECK(std::abs(d_si - 13.45e-6) / 13.45e-6 < 0.01);
  const double omega_si = g.wells->omega * u.omega_ref();
  CHECK(std::abs(omega_si / (2 * kPi) - 5.6e6) / 5.6e6 < 0.01);
}

TEST_CASE("geometry closed forms") {
  SUBCASE("symmetric wells") {
    const auto g = geometry({-0.25, 1.0 / 512, 0.0});
    REQUIRE(g.wells);
    CHECK(g.wells->x_minus == -g.wells->x_plus);
    CHECK(g.wells->separation == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(g.wells->omega == doctest::Approx(1.0));
    CHECK(g.wells->delta_v == 0.0);
  }
  SUBCASE("biased wells against cubic roots") {
    // Roots of 2Ax + 4Bx^3 + C for A = -0.25, B = 1.953e-3, C = 0.09375.
    const PotentialParams p{-0.25, 1.953e-3, 0.09375};
    const auto g = geometry(p);
    REQUIRE(g.wells);
    const double root_minus = -8.09240771203318;
    const double root_plus = 7.90480455171318;
    const double d = g.wells->separation;
    // The closed form drops O(C^2) terms; the shift it misses is 1.7e-3 here.
    CHECK(std::abs(g.wells->x_minus - root_minus) <= 1e-2 * d);
    CHECK(std::abs(g.wells->x_plus - root_plus) <= 1e-2 * d);
    CHECK(std::abs(g.wells->x_minus - root_minus) < 2e-3);
    CHECK(std::abs(g.wells->x_plus - root_plus) < 2e-3);
    CHECK(g.wells->x_plus - g.wells->x_minus == doctest::Approx(d));
    CHECK(g.wells->delta_v == doctest::Approx(p.C * d));
  }
  SUBCASE("harmonic trap center") {
    const auto g = geometry({0.5, 0.0, 0.2});
    CHECK_FALSE(g.wells);
    REQUIRE(g.x_eq);
    CHECK(*g.x_eq == doctest::Approx(-0.2));
  }
  SUBCASE("regime errors") {
    CHECK_THROWS_AS(geometry({-0.25, 0.0, 0.0}), RegimeError);
    CHECK_THROWS_AS(geometry({0.0, 1e-3, 0.0}), RegimeError);
    CHECK_THROWS_AS(geometry({0.5, 1e-3, 0.0}), RegimeError);
  }
}

TEST_CASE("small-bias check") {
  const UnitSystem u(kBeMass, kAlpha0);
  const auto p0 = to_dimensionless({kAlpha0, kBeta0, 0}, u);
  CHECK(small_bias_check(p0).ratio == 0.0);
  CHECK(small_bias_check(p0).pass);

  const double c4 = bias_for_target(4, p0.A, p0.B);
  CHECK(rel(c4 * u.force_unit(), 9.730288898e-22) < 1e-8);
  const auto report = small_bias_check({p0.A, p0.B, c4});
  CHECK(rel(report.ratio, 1.154853e-5) < 1e-5);
  CHECK(report.pass);
  // The bound itself, in newtons.
  CHECK(rel(c4 * u.force_unit() / report.ratio, 8.425561434e-17) < 1e-6);

  const double bound = c4 / report.ratio;
  const auto at_bound = small_bias_check({p0.A, p0.B, bound});
  CHECK(at_bound.ratio == doctest::Approx(1.0));
  CHECK_FALSE(at_bound.pass);
  CHECK_THROWS_AS(small_bias_check({0.5, 0.0, 0.0}), RegimeError);
}

TEST_CASE("bias for a target index") {
  CHECK(bias_for_target(1, -0.25, 1.0 / 512) == doctest::Approx(0.03125).epsilon(1e-14));
  CHECK(bias_for_target(2, -0.25, 1.0 / 512) == doctest::Approx(0.09375).epsilon(1e-14));
  CHECK(bias_for_target(1, -0.25, 1.953e-3) == doctest::Approx(0.5 / std::sqrt(0.5 / 1.953e-3)));
  CHECK_THROWS_AS(bias_for_target(0, -0.25, 1.0 / 512), InvalidArgument);
  for (int n : {1, 2, 5, 8}) {
    const double c = bias_for_target(n, -0.25, 1.0 / 512);
    const auto g = geometry({-0.25, 1.0 / 512, c});
    const double levels = c * 16.0 / 1.0;
    CHECK(levels > n - 1 + 0.5 - 1e-12);
    CHECK(levels < n - 0.5 + 1e-12);
    CHECK(g.wells->delta_v == doctest::Approx(n - 0.5));
    CHECK(small_bias_check({-0.25, 1.0 / 512, c}).ratio < 0.1);
  }
}

TEST_CASE("maximum target index bound") {
  const UnitSystem u(kBeMass, kAlpha0);
  const auto p0 = to_dimensionless({kAlpha0, kBeta0, 0}, u);
  CHECK(rel(max_target_bound(p0.A, p0.B), 303068.75) < 1e-6);
  CHECK(max_target_bound(-0.25, 1.953e-3) == doctest::Approx(85.3388).epsilon(1e-5));
  CHECK(max_target_bound(-0.25, 4 * 1.953e-3) == doctest::Approx(max_target_bound(-0.25, 1.953e-3) / 4));
}

TEST_CASE("sigmoid deformation path") {
  const auto paper = paper_preset(4).path;
  // kappa = 100 / (alpha0 - alpha_f) in SI is about -7.092 per pN/m.
  const UnitSystem u(kBeMass, kAlpha0);
  const double alpha_scale = u.energy_unit() / (u.length_unit() * u.length_unit());
  CHECK(rel(paper.kappa / alpha_scale, -7.0921986e12) < 1e-7);

  CHECK(rel(paper.beta(paper.A0), paper.B0) < 1e-15);
  CHECK(paper.beta(paper.Af) <= 1e-20 * paper.B0);
  CHECK(paper.beta(paper.Af) / paper.B0 == doctest::Approx(1.3401e-26).epsilon(1e-3));
  CHECK(paper.beta(0.0) / paper.B0 == doctest::Approx(0.99916912384).epsilon(1e-10));
  CHECK(beta_of_alpha(paper, 0.1) == paper.beta(0.1));

  const auto mini = mini_preset(2).path;
  double prev = mini.beta(mini.A0);
  for (int i = 1; i <= 400; ++i) {
    const double a = mini.A0 + (mini.Af - mini.A0) * i / 400.0;
    const double b = mini.beta(a);
    CHECK(b <= prev);
    prev = b;
    const double h = 1e-6;
    const double fd = (mini.beta(a + h) - mini.beta(a - h)) / (2 * h);
    CHECK(mini.dbeta(a) == doctest::Approx(fd).epsilon(1e-6).scale(mini.B0));
  }
  CHECK_NOTHROW(mini.validate_multiplexing());
  CHECK_NOTHROW(paper.validate_multiplexing());

  auto soft = mini;
  soft.kappa = -5.0;
  CHECK_THROWS_AS(soft.validate_multiplexing(), InvalidArgument);
  auto asym = mini;
  asym.Af = 0.4;
  CHECK_THROWS_AS(asym.validate_multiplexing(), InvalidArgument);
}

TEST_CASE("asymptotics hold whenever the sigmoid is steep enough") {
  for (double kappa : {-60.0, -133.0, -500.0}) {
    DeformationPath p{-0.25, 0.5, 1.0 / 512, kappa, 0.05, 0.0, 0};
    if (std::abs(kappa) * std::min(std::abs(p.A0 - p.eps), std::abs(p.Af - p.eps)) < 20) continue;
    CHECK(p.beta(p.A0) >= p.B0 * (1 - 1e-6));
    CHECK(p.beta(p.A0) <= p.B0);
    CHECK(p.beta(p.Af) <= p.B0 * 1e-6);
    CHECK(p.beta(p.Af) >= 0.0);
  }
}

TEST_CASE("logistic is stable at extreme arguments") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(800.0) == 1.0);
  CHECK(logistic(-800.0) >= 0.0);
  CHECK(logistic(-40.0) == doctest::Approx(std::exp(-40.0)).epsilon(1e-12));
}

TEST_CASE("quanta number") {
  const double c = bias_for_target(3, -0.25, 1.0 / 512);
  CHECK(quanta_number({-0.25, 1.0 / 512, c}) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(quanta_number({-0.25, 1.0 / 512, 0.0}) == 0.0);
  CHECK(quanta_number({-0.25, 1.0 / 512, c}) == quanta_number({0.1, 1.0 / 512, c}));
  CHECK(quanta_number({-0.25, 1.0 / 512, c}) == quanta_number({-3.0, 1.0 / 512, c}));
  CHECK_THROWS_AS(quanta_number({0.5, 0.0, 0.1}), RegimeError);
}

TEST_CASE("potential on grid") {
  const SpatialGrid grid(-4.0, 4.0, 64);
  const auto v = potential_on_grid({0.5, 0.0, 0.0}, grid);
  const std::size_t at_one = 40;  // x = -4 + 40 * 0.125 = 1
  CHECK(grid.x(at_one) == 1.0);
  CHECK(v[at_one] == 0.5);

  const auto sym = potential_on_grid({-0.25, 1.0 / 512, 0.0}, grid);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(sym[i] == sym[grid.size() - i]);

  const PotentialParams fin{0.5, 0.0, 0.3};
  const double x_eq = *geometry(fin).x_eq;
  const SpatialGrid fine(-10.0, 10.0, 4096);
  const auto vf = potential_on_grid(fin, fine);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const double x = fine.x(i);
    const double shifted = fin.A * (x - x_eq) * (x - x_eq) - fin.C * fin.C / (4 * fin.A);
    CHECK(vf[i] == doctest::Approx(shifted).epsilon(1e-12).scale(1.0));
    CHECK(vf[i] >= fin.A * x_eq * x_eq + fin.C * x_eq - 1e-12);
  }
}

}  // TEST_SUITE
