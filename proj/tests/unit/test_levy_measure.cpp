#include "levy/levy_measure.hpp"

#include <doctest.h>
#include <stdexcept>

#include <cmath>

using namespace levy;

TEST_CASE("atom measure moments, mass and restriction") {
  const auto nu = LevyMeasure::from_atoms({{-1.0, 0.5}, {2.0, 0.25}});
  CHECK(nu.kind() == LevyMeasure::Kind::discrete_atoms);
  CHECK(nu.moment(1) == doctest::Approx(0.0));
  CHECK(nu.moment(2) == doctest::Approx(1.5));
  CHECK(nu.moment(3) == doctest::Approx(-0.5 + 2.0));
  CHECK(nu.mass() == doctest::Approx(0.75));
  CHECK(nu.mass(1.5) == doctest::Approx(0.25));
  CHECK(nu.small_jump_variance(1.5) == doctest::Approx(0.5));
  CHECK(nu.restricted_nodes(3.0).empty());
}

TEST_CASE("atom validation") {
  CHECK_THROWS_WITH_AS(LevyMeasure::from_atoms({{0.0, 1.0}}), doctest::Contains("z=0 forbidden"), std::invalid_argument);
  CHECK_THROWS_AS(LevyMeasure::from_atoms({}), std::invalid_argument);
  CHECK_THROWS_AS(LevyMeasure::from_atoms({{1.0, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(LevyMeasure::from_atoms({{1.0, NAN}}), std::invalid_argument);
}

TEST_CASE("psi of the symmetric two-point measure is cos(u) - 1") {
  const auto nu = LevyMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}});
  for (double u : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const auto p = nu.psi(u);
    CHECK(p.real() == doctest::Approx(std::cos(u) - 1.0));
    CHECK(std::abs(p.imag()) < 1e-15);
  }
}

TEST_CASE("uniform density on 0.5 < |z| < 2: closed-form moments") {
  const auto nu = LevyMeasure::from_density("uniform", named_density("uniform", 3.0, 0.0), 0.5, 2.0);
  CHECK(nu.mass() == doctest::Approx(2.0 * 3.0 * 1.5).epsilon(1e-12));
  CHECK(nu.moment(1) == doctest::Approx(0.0).scale(1.0));
  CHECK(nu.moment(2) == doctest::Approx(2.0 * 3.0 * (8.0 - 0.125) / 3.0).epsilon(1e-12));
  CHECK(nu.moment(4) == doctest::Approx(2.0 * 3.0 * (32.0 - 0.03125) / 5.0).epsilon(1e-12));
  CHECK(nu.density_at(1.0) == doctest::Approx(3.0));
  CHECK(nu.density_at(0.1) == 0.0);
  // restriction to |z| >= 1 re-integrates the tail
  CHECK(nu.mass(1.0) == doctest::Approx(2.0 * 3.0).epsilon(1e-12));
}

TEST_CASE("one-sided power density") {
  const double a = 0.5;
  const auto nu = LevyMeasure::from_density("power", named_density("power", 1.0, a), 0.1, 1.0, DensitySides::positive);
  // int_0.1^1 z^2 z^{-1-a} dz = (1 - 0.1^{2-a}) / (2 - a)
  CHECK(nu.moment(2) == doctest::Approx((1.0 - std::pow(0.1, 2.0 - a)) / (2.0 - a)).epsilon(1e-10));
  for (const auto& atom : nu.nodes()) CHECK(atom.z > 0.0);
}

TEST_CASE("density validation") {
  CHECK_THROWS_AS(LevyMeasure::from_density("u", named_density("uniform", 1.0, 0.0), 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LevyMeasure::from_density("u", named_density("uniform", 1.0, 0.0), 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(named_density("gamma", 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(named_density("exponential", 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("mark sampler reproduces the normalized measure") {
  const auto nu = LevyMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}, {2.0, 0.25}});
  const auto sampler = nu.mark_sampler(0.0);
  CHECK(sampler.total_mass() == doctest::Approx(1.25));
  CounterRng rng(9, Stream::mark);
  const int n = 100000;
  int neg = 0, two = 0;
  for (int i = 0; i < n; ++i) {
    const double z = sampler.sample(rng);
    neg += z == -1.0;
    two += z == 2.0;
  }
  CHECK(std::abs(neg / double(n) - 0.4) < 0.01);
  CHECK(std::abs(two / double(n) - 0.2) < 0.01);

  const auto dens = LevyMeasure::from_density("e", named_density("exponential", 1.0, 1.0), 0.2, 3.0);
  const auto ds = dens.mark_sampler(0.0);
  double mean_abs = 0;
  for (int i = 0; i < 50000; ++i) mean_abs += std::abs(ds.sample(rng));
  double expected = 0;
  for (const auto& a : dens.nodes()) expected += a.weight * std::abs(a.z);
  CHECK(mean_abs / 50000 == doctest::Approx(expected / dens.mass()).epsilon(0.02));
}

TEST_CASE("moment table") {
  const auto nu = LevyMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}});
  const MomentTable t(nu, 12);
  CHECK(t.second_moment() == doctest::Approx(1.0));
  CHECK(t.moment(12) == doctest::Approx(1.0));
  CHECK(t.moment(11) == doctest::Approx(0.0));
  CHECK_THROWS_AS(t.moment(13), std::out_of_range);
}
