#include "levy/sheet.hpp"

#include "levy/montecarlo.hpp"

#include <doctest.h>
#include <stdexcept>

#include <cmath>
#include <memory>
#include <vector>

using namespace levy;

namespace {

std::shared_ptr<const LevyMeasure> two_point() {
  return std::make_shared<const LevyMeasure>(LevyMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}}));
}

std::shared_ptr<const LevyMeasure> skewed() {
  return std::make_shared<const LevyMeasure>(LevyMeasure::from_atoms({{-0.5, 1.0}, {1.5, 0.4}}));
}

}  // namespace

TEST_CASE("domain and box validation") {
  CHECK_THROWS_AS(Domain::from_bounds({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Domain::from_bounds({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Box::from_corners({1.0}, {0.0}), std::invalid_argument);
  CHECK(Domain::from_extents({2.0, 3.0}).volume() == doctest::Approx(6.0));
  CHECK_THROWS_AS(MarkSet({{-1.0, 1.0}}), std::invalid_argument);
  CHECK(MarkSet::away_from_zero(0.5).contains(-0.7));
  CHECK_FALSE(MarkSet::away_from_zero(0.5).contains(0.2));
}

TEST_CASE("same seed, same path; different samples differ") {
  const auto dom = Domain::from_extents({2.0, 1.5});
  const auto a = simulate_levy_sheet(skewed(), dom, 0.0, 42, 7);
  const auto b = simulate_levy_sheet(skewed(), dom, 0.0, 42, 7);
  const auto c = simulate_levy_sheet(skewed(), dom, 0.0, 42, 8);
  CHECK(a.locations == b.locations);
  CHECK(a.marks == b.marks);
  CHECK((a.marks != c.marks || a.locations != c.locations));
  for (std::size_t k = 0; k < a.jump_count(); ++k) CHECK(dom.contains(a.location(k)));
}

TEST_CASE("sheet values vanish on the lower faces and box increments agree") {
  const auto dom = Domain::from_extents({2.0, 1.5});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto path = simulate_levy_sheet(skewed(), dom, 0.0, 3, s);
    CHECK(sheet_value(path, std::vector<double>{0.0, 1.0}) == doctest::Approx(0.0));
    CHECK(sheet_value(path, std::vector<double>{1.3, 0.0}) == doctest::Approx(0.0));
    const auto box = Box::from_corners({0.3, 0.2}, {1.7, 1.1});
    CHECK(box_increment(path, box) == doctest::Approx(box_increment_direct(path, box)).epsilon(1e-12));
  }
  const auto path = simulate_levy_sheet(skewed(), dom, 0.0, 3, 0);
  CHECK_THROWS_AS(sheet_value(path, std::vector<double>{2.5, 1.0}), std::out_of_range);
}

TEST_CASE("hand-built path: sheet value counts marks in [0, x] minus drift") {
  const auto nu = skewed();  // drift int z nu = -0.5 + 0.6 = 0.1
  const auto dom = Domain::from_extents({1.0});
  const auto path = make_levy_path(nu, dom, 0.0, {0.2, 0.7}, {1.5, -0.5});
  CHECK(path.drift_rate == doctest::Approx(0.1));
  CHECK(sheet_value(path, std::vector<double>{0.5}) == doctest::Approx(1.5 - 0.05));
  CHECK(sheet_value(path, std::vector<double>{1.0}) == doctest::Approx(1.0 - 0.1));
  CHECK(jump_count(path, Box::from_corners({0.0}, {1.0}), MarkSet::positive()) == 1);
  CHECK_THROWS_AS(make_levy_path(nu, dom, 0.0, {1.2}, {1.5}), std::invalid_argument);
  CHECK_THROWS_AS(make_levy_path(nu, dom, 0.0, {0.2}, {0.0}), std::invalid_argument);
}

TEST_CASE("compensator rule integrates polynomials times the measure") {
  const auto nu = skewed();
  const auto dom = Domain::from_bounds({-1.0, 0.0}, {2.0, 1.0});
  const auto rule = CompensatorRule::build(dom, *nu, 0.0);
  // int x1^2 x2 dx * int z^2 nu = (9/3)(1/2) * (0.25 + 0.9)
  const double got = rule.integrate([](std::span<const double> x, double z) { return x[0] * x[0] * x[1] * z * z; });
  CHECK(got == doctest::Approx(1.5 * 1.15).epsilon(1e-13));
}

TEST_CASE("compensated integrals are centered with variance int int f^2") {
  const auto nu = skewed();
  const auto dom = Domain::from_extents({1.0});
  const auto rule = CompensatorRule::build(dom, *nu, 0.0);
  const JumpFunction f = [](std::span<const double> x, double z) { return z * std::cos(3.0 * x[0]); };
  const std::size_t n = 20000;
  const auto samples = run_samples(n, 1, 1, [&](std::size_t i, std::span<double> row) {
    row[0] = compensated_integral(simulate_levy_sheet(nu, dom, 0.0, 5, i), f, rule);
  });
  const auto st = summarize(samples.column(0));
  const double var = rule.integrate([&](std::span<const double> x, double z) { return f(x, z) * f(x, z); });
  CHECK(st.mean_within(0.0));
  CHECK(st.variance_within(var));
}

TEST_CASE("empirical characteristic function within its envelope") {
  const auto dom = Domain::from_extents({1.0});
  const std::vector<double> u{0.5, 2.0};
  const auto report = empirical_cf_check(two_point(), dom, Box::from_corners({0.0}, {1.0}), u, 20000, 17);
  CHECK(report.points.size() == 2);
  for (const auto& p : report.points) {
    CHECK(p.target.real() == doctest::Approx(std::exp(std::cos(p.u) - 1.0)));
    CHECK(p.within);
  }
}

TEST_CASE("truncation epsilon drops small jumps and records their variance") {
  const auto nu = skewed();
  const auto dom = Domain::from_extents({3.0});
  const auto path = simulate_levy_sheet(nu, dom, 1.0, 1, 0);
  for (double z : path.marks) CHECK(std::abs(z) >= 1.0);
  CHECK(path.omitted_small_jump_variance == doctest::Approx(0.25));
  CHECK(path.drift_rate == doctest::Approx(0.6));
}

TEST_CASE("Brownian sheet: cell variances and anchored values") {
  const auto dom = Domain::from_extents({1.0, 2.0});
  const std::vector<std::size_t> cells{4, 5};
  const auto grid = SheetGrid::uniform(dom, cells);
  CHECK(grid.cell_count() == 20);
  CHECK(grid.node_count() == 30);
  CHECK(grid.cell_volume(7) == doctest::Approx(0.25 * 0.4));
  const std::size_t n = 4000;
  std::vector<double> corner(n), cell(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto path = simulate_brownian_sheet(grid, 8, s);
    corner[s] = path.value(std::vector<double>{1.0, 2.0});
    cell[s] = path.increments[7];
    CHECK(path.value(std::vector<double>{0.0, 1.2}) == 0.0);
    const auto box = Box::from_corners({0.25, 0.4}, {0.75, 1.6});
    double direct = 0;
    for (std::size_t a = 1; a < 3; ++a)
      for (std::size_t b = 1; b < 4; ++b) direct += path.increments[a * 5 + b];
    CHECK(box_increment(path, box) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(summarize(corner).variance_within(2.0));
  CHECK(summarize(cell).variance_within(0.1));
  CHECK_THROWS(simulate_brownian_sheet(grid, 8, 0).value(std::vector<double>{0.3, 1.0}));
}
