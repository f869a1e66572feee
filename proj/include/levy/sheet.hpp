#pragma once

#include "levy/levy_measure.hpp"
#include "levy/quadrature.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace levy {

// Axis-aligned parameter domain. Sheets are anchored at the origin, so the
// usual domain is [0, T_1] x ... x [0, T_n]; symmetric boxes around the origin
// are used when simulating the Poisson random measure for chaos work.
struct Domain {
  std::vector<double> lower;
  std::vector<double> upper;

  static Domain from_extents(std::vector<double> extents);
  static Domain from_bounds(std::vector<double> lower, std::vector<double> upper);

  std::size_t dim() const noexcept { return lower.size(); }
  double volume() const noexcept;
  bool contains(std::span<const double> x) const noexcept;
};

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box from_corners(std::vector<double> lower, std::vector<double> upper);

  std::size_t dim() const noexcept { return lower.size(); }
  double volume() const noexcept;
  bool contains(std::span<const double> x) const noexcept;  // closed box
  bool inside(const Domain& domain) const noexcept;
};

struct MarkInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool include_lo = true;
  bool include_hi = true;

  bool contains(double z) const noexcept;
};

// Finite union of intervals of jump sizes; must not contain 0.
class MarkSet {
 public:
  explicit MarkSet(std::vector<MarkInterval> parts);

  static MarkSet positive();
  static MarkSet negative();
  // {|z| >= eps}, eps > 0.
  static MarkSet away_from_zero(double eps);

  bool contains(double z) const noexcept;
  std::span<const MarkInterval> parts() const noexcept { return parts_; }

 private:
  std::vector<MarkInterval> parts_;
};

// One finite-activity realization of a pure-jump Levy sheet: the jump list of
// its Poisson random measure plus the deterministic compensator data.
struct LevySheetPath {
  std::shared_ptr<const LevyMeasure> measure;
  Domain domain;
  double epsilon = 0.0;
  std::vector<double> locations;  // jump_count() x dim, point-major
  std::vector<double> marks;
  double drift_rate = 0.0;       // int_{|z|>=eps} z nu(dz)
  double jump_intensity = 0.0;   // nu({|z| >= eps})
  double omitted_small_jump_variance = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;

  std::size_t dim() const noexcept { return domain.dim(); }
  std::size_t jump_count() const noexcept { return marks.size(); }
  std::span<const double> location(std::size_t k) const noexcept {
    return {locations.data() + k * dim(), dim()};
  }
};

class LevySheetSimulator {
 public:
  LevySheetSimulator(std::shared_ptr<const LevyMeasure> measure, Domain domain, double epsilon = 0.0);

  LevySheetPath simulate(std::uint64_t seed, std::uint64_t sample = 0) const;

  const Domain& domain() const noexcept { return domain_; }
  double epsilon() const noexcept { return epsilon_; }
  double expected_jump_count() const noexcept { return intensity_ * domain_.volume(); }

 private:
  std::shared_ptr<const LevyMeasure> measure_;
  Domain domain_;
  double epsilon_;
  MarkSampler sampler_;
  double intensity_;
  double drift_;
  double omitted_;
};

LevySheetPath simulate_levy_sheet(std::shared_ptr<const LevyMeasure> measure, const Domain& domain,
                                  double epsilon, std::uint64_t seed, std::uint64_t sample = 0);

// Path with a prescribed jump list (compensator data taken from the measure).
LevySheetPath make_levy_path(std::shared_ptr<const LevyMeasure> measure, const Domain& domain, double epsilon,
                             std::vector<double> locations, std::vector<double> marks);

// L(x) = sum of marks with location in [0, x] - drift_rate * |[0, x]|.
double sheet_value(const LevySheetPath& path, std::span<const double> x);

// 2^n-corner inclusion-exclusion of sheet values.
double box_increment(const LevySheetPath& path, const Box& box);

// Same quantity computed from the jump list: marks inside the box minus
// drift_rate * |box|. Works for any box inside the domain.
double box_increment_direct(const LevySheetPath& path, const Box& box);

std::size_t jump_count(const LevySheetPath& path, const Box& box, const MarkSet& marks);

using JumpFunction = std::function<double(std::span<const double> x, double z)>;

// Product quadrature for lambda x nu on domain x {|z| >= eps}: tensor
// composite Gauss-Legendre in space times the measure's nodes.
class CompensatorRule {
 public:
  static CompensatorRule build(const Domain& domain, const LevyMeasure& measure, double epsilon,
                               std::size_t nodes_per_panel = 16, double max_panel_width = 1.0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> point(std::size_t q) const noexcept { return {points_.data() + q * dim_, dim_}; }
  double mark(std::size_t q) const noexcept { return marks_[q]; }
  double weight(std::size_t q) const noexcept { return weights_[q]; }

  const TensorRule& space_rule() const noexcept { return space_; }
  std::span<const Atom> mark_nodes() const noexcept { return mark_nodes_; }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < weights_.size(); ++q) sum += weights_[q] * f(point(q), marks_[q]);
    return sum;
  }

 private:
  std::size_t dim_ = 0;
  TensorRule space_;
  std::vector<Atom> mark_nodes_;
  std::vector<double> points_;
  std::vector<double> marks_;
  std::vector<double> weights_;
};

double jump_sum(const LevySheetPath& path, const JumpFunction& f);

// sum over jumps of f minus the compensator int int f dx nu(dz).
double compensated_integral(const LevySheetPath& path, const JumpFunction& f, const CompensatorRule& rule);
double compensated_integral(const LevySheetPath& path, const JumpFunction& f);

struct CfPoint {
  double u = 0.0;
  std::complex<double> empirical;
  std::complex<double> target;
  double deviation = 0.0;
  double envelope = 0.0;  // 3 standard errors of the complex sample mean
  bool within = true;
};

struct CfReport {
  std::vector<CfPoint> points;
  std::size_t samples = 0;
  double max_deviation = 0.0;
  bool all_within = true;
};

// Empirical E[exp(i u Delta_R L)] against exp(|R| psi(u)).
CfReport empirical_cf_check(std::shared_ptr<const LevyMeasure> measure, const Domain& domain, const Box& box,
                            std::span<const double> u_grid, std::size_t n_seeds, std::uint64_t seed,
                            unsigned workers = 1, double epsilon = 0.0);

// Per-axis partition points of a Brownian sheet grid (each axis sorted, >= 2 points).
struct SheetGrid {
  std::vector<std::vector<double>> axes;

  static SheetGrid uniform(const Domain& domain, std::span<const std::size_t> cells_per_axis);

  std::size_t dim() const noexcept { return axes.size(); }
  std::size_t cell_count() const noexcept;
  std::size_t node_count() const noexcept;
  double cell_volume(std::size_t flat_cell) const;
};

// Brownian sheet on a grid: independent centered Gaussian cell increments with
// variance equal to the cell volume; node values are cumulative sums anchored
// at the grid's lower corner.
struct BrownianSheetPath {
  SheetGrid grid;
  std::vector<double> increments;  // cells, last axis fastest
  std::vector<double> values;      // nodes, last axis fastest
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;

  double value_at_node(std::span<const std::size_t> index) const;
  // Value at a point that lies on grid nodes in every coordinate.
  double value(std::span<const double> x) const;
};

BrownianSheetPath simulate_brownian_sheet(const SheetGrid& grid, std::uint64_t seed, std::uint64_t sample = 0);

// Increments only, written into out (size grid.cell_count()); sqrt of cell
// volumes supplied by the caller so hot loops skip recomputing them.
void brownian_increments(std::span<const double> sqrt_cell_volumes, std::uint64_t seed, std::uint64_t sample,
                         std::span<double> out);

// Grid-aligned box increment by inclusion-exclusion of node values.
double box_increment(const BrownianSheetPath& path, const Box& box);

}  // namespace levy
