#include "levy/fracheat.hpp"

#include <doctest.h>
#include <stdexcept>

#include <cmath>
#include <memory>
#include <vector>

using namespace levy;

namespace {

double gauss(double x, double t) { return std::exp(-x * x / (4 * t)) / std::sqrt(4 * M_PI * t); }

}  // namespace

TEST_CASE("alpha = 1 reduces to the Gaussian heat kernel") {
  HeatConfig c;
  c.alpha = 1.0;
  c.lambda = 1.0;
  c.t = 0.7;
  for (double x = -3.0; x <= 3.0; x += 0.5) {
    const std::vector<double> pt{x};
    CHECK(deterministic_term(c, pt) == doctest::Approx(gauss(x, 0.7)).epsilon(1e-10));
    CHECK(greens_kernel(c, 0.7, pt) == doctest::Approx(gauss(x, 0.7)).epsilon(1e-10));
  }
  c.d = 2;
  const std::vector<double> p2{0.4, -0.9};
  CHECK(deterministic_term(c, p2) == doctest::Approx(std::exp(-(0.16 + 0.81) / 2.8) / (4 * M_PI * 0.7)).epsilon(1e-9));
}

TEST_CASE("profile table against direct quadrature") {
  for (double a : {0.5, 0.8, 1.3, 1.7}) {
    const KernelProfile p(a, a, 1);
    for (double rho : {0.0, 0.37, 1.0, 2.5, 7.0}) {
      CHECK(std::abs(p.value(rho) - p.direct(rho)) <= 1e-8 * std::abs(p.direct(rho)) + 1e-13);
    }
    // int_R Phi = E_{a,a}(0) = 1 / Gamma(a)
    CHECK(2.0 * p.primitive(59.0) == doctest::Approx(1.0 / std::tgamma(a)).epsilon(1e-9));
  }
  const KernelProfile q(1.4, 1.4, 2);
  for (double rho : {0.2, 1.0, 3.0}) CHECK(std::abs(q.value(rho) - q.direct(rho)) <= 1e-7 * std::abs(q.direct(rho)) + 1e-13);
}

TEST_CASE("profile against the Wright-function series") {
  // Phi_beta(rho) = W_{-alpha/2, beta-alpha/2}(-rho) / 2, summed in 300-digit arithmetic.
  struct Row {
    double alpha, beta;
    double v[5];  // rho = 0, 0.5, 1.5, 2.5, 3
  };
  const Row rows[] = {
      {1.7, 1.7, {0.44944477244359214952, 0.43483027894222002298, 0.098828144311530879546, 1.9015898144200699248e-13, 0.0}},
      {0.8, 0.8, {0.22541209959720554476, 0.21065240102487349796, 0.13258655108861698629, 0.059389061389704402974, 0.03568445965450967408}},
      {0.6, 1.0, {0.38519159193328300464, 0.28050082436583214221, 0.13057551015758942664, 0.052514275361586110583, 0.031755616826861936665}},
      {1.3, 1.3, {0.3610642464493842505, 0.34226721315082486584, 0.18383236214383528595, 0.030393401475660328301, 0.0065349652194798095492}},
  };
  const double rhos[] = {0.0, 0.5, 1.5, 2.5, 3.0};
  for (const auto& r : rows) {
    const KernelProfile p(r.alpha, r.beta, 1);
    for (int i = 0; i < 5; ++i) {
      CAPTURE(r.alpha);
      CAPTURE(rhos[i]);
      CHECK(std::abs(p.direct(rhos[i]) - r.v[i]) < 1e-13);
      CHECK(std::abs(p.value(rhos[i]) - r.v[i]) < 1e-11);
    }
    // far field is numerically zero (the true value is below 1e-40 for alpha = 1.7)
    if (r.alpha > 1.0) CHECK(std::abs(p.direct(55.0)) < 1e-14);
  }
}

TEST_CASE("profile L2 norm by Plancherel against the table") {
  const KernelProfile p(0.9, 0.9, 1);
  // tail beyond 0 covers the whole line
  CHECK(p.l2_tail(0.0) == doctest::Approx(p.l2_norm_sq()).epsilon(1e-6));
  const KernelProfile g(1.0, 1.0, 1);
  CHECK(g.l2_norm_sq() == doctest::Approx(1.0 / std::sqrt(8 * M_PI)).epsilon(1e-12));
  CHECK(g.l2_tail(1.0) == doctest::Approx(g.l2_norm_sq() * std::erfc(1.0 / std::sqrt(2.0))).epsilon(1e-6));
}

TEST_CASE("subdiffusive kernel is nonnegative with a heavier tail than the Gaussian") {
  const KernelProfile p(0.6, 0.6, 1);
  for (double rho = 0.0; rho < 20.0; rho += 0.5) CHECK(p.value(rho) > -1e-14);
  CHECK(p.value(3.0) / p.value(0.0) > gauss(3.0, 1.0) / gauss(0.0, 1.0));
}

TEST_CASE("configuration validation") {
  HeatConfig c;
  c.points = {{0.0}};
  c.alpha = 2.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.alpha = 0.8;
  c.d = 3;
  c.points = {{0.0, 0.0, 0.0}};
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("d >= 3"), std::invalid_argument);
  c.d = 1;
  c.points = {{0.0}};
  c.t = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.t = 1.0;
  c.gamma = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // Levy amplitude without a measure
}

TEST_CASE("warnings for super-diffusion and divergent variance") {
  HeatConfig c;
  c.points = {{0.0}};
  c.alpha = 1.3;
  c.sigma = 1.0;
  c.time_cells = 8;
  c.n_samples = 4;
  CHECK(HeatSolver(c).warnings().size() == 1);
  c.alpha = 0.6;
  const HeatSolver s(c);
  CHECK(s.warnings().size() == 1);
  CHECK(std::isinf(s.isometry_variance(0)));
}

TEST_CASE("discrete I2 variance increases under refinement towards the isometry value") {
  HeatConfig c;
  c.alpha = 1.0;
  c.sigma = 1.0;
  c.points = {{0.0}};
  double prev = 0.0;
  for (int k = 0; k < 3; ++k) {
    c.time_cells = 16 << k;
    c.space_step = 0.08 / (1 << k);
    const HeatSolver s(c);
    const double v = s.discrete_variance(0);
    CHECK(v > prev);
    CHECK(v < s.isometry_variance(0));
    prev = v;
  }
  // sigma^2 / sqrt(8 pi) * int_0^1 s^{-1/2} ds
  CHECK(HeatSolver(c).isometry_variance(0) == doctest::Approx(2.0 / std::sqrt(8 * M_PI)).epsilon(1e-10));
}

TEST_CASE("kernel mass over the window and Brownian draws") {
  HeatConfig c;
  c.alpha = 1.0;
  c.sigma = 0.5;
  c.points = {{0.0}, {0.3}};
  c.time_cells = 16;
  const HeatSolver s(c);
  // int_0^t int_R G = t for alpha = 1
  CHECK(s.kernel_mass(0) == doctest::Approx(1.0).epsilon(1e-4));
  std::vector<double> a(2), b(2);
  s.stochastic_term_brownian(3, 11, a);
  s.stochastic_term_brownian(3, 11, b);
  CHECK(a == b);
}

TEST_CASE("Levy term: hand-built path against direct kernel sums") {
  HeatConfig c;
  c.alpha = 0.9;
  c.gamma = 2.0;
  c.sigma = 0.0;
  c.points = {{0.1}};
  c.time_cells = 16;
  c.measure = std::make_shared<const LevyMeasure>(LevyMeasure::from_atoms({{-0.5, 1.0}, {1.5, 0.4}}));
  const HeatSolver s(c);
  const Domain& dom = s.noise_domain();
  const auto path = make_levy_path(c.measure, dom, 0.0, {0.5, 0.4, 0.9, -0.6}, {1.5, -0.5});
  std::vector<double> out(1);
  s.stochastic_term_levy(path, out);
  const std::vector<double> r1{0.1 - 0.4}, r2{0.1 + 0.6};
  const double jumps = 1.5 * greens_kernel(c, 0.5, r1) - 0.5 * greens_kernel(c, 0.1, r2);
  const double expected = 2.0 * (jumps - 0.1 * s.kernel_mass(0));
  CHECK(out[0] == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("solve() is centered and reproducible across worker counts") {
  HeatConfig c;
  c.alpha = 0.9;
  c.lambda = 0.5;
  c.sigma = 0.4;
  c.gamma = 0.6;
  c.points = {{0.0}, {0.5}};
  c.time_cells = 16;
  c.measure = std::make_shared<const LevyMeasure>(LevyMeasure::from_atoms({{-0.5, 1.0}, {1.5, 0.4}}));
  c.n_samples = 3000;
  c.workers = 1;
  const auto a = HeatSolver(c).solve();
  c.workers = 3;
  const auto b = HeatSolver(c).solve();
  REQUIRE(a.points.size() == 2);
  for (std::size_t p = 0; p < 2; ++p) {
    CHECK(a.points[p].mean_y == b.points[p].mean_y);
    CHECK(a.points[p].var_y == b.points[p].var_y);
    CHECK(std::abs(a.points[p].mean_i2) <= 3.5 * a.points[p].se_i2);
    CHECK(std::abs(a.points[p].mean_i3) <= 3.5 * a.points[p].se_i3);
    CHECK(a.points[p].bias_estimate >= 0.0);
  }
}
