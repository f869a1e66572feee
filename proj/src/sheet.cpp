#include "levy/sheet.hpp"

#include "levy/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace levy {

namespace {

void check_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double restricted_first_moment(const LevyMeasure& measure, double eps) {
  double sum = 0.0;
  for (const auto& a : measure.restricted_nodes(eps)) sum += a.weight * a.z;
  return sum;
}

std::size_t find_node(const std::vector<double>& axis, double x) {
  const auto it = std::lower_bound(axis.begin(), axis.end(), x - 1e-12 * (1.0 + std::abs(x)));
  if (it == axis.end() || std::abs(*it - x) > 1e-12 * (1.0 + std::abs(x))) {
    throw std::invalid_argument("coordinate is not a grid node of the Brownian sheet");
  }
  return static_cast<std::size_t>(it - axis.begin());
}

}  // namespace

Domain Domain::from_extents(std::vector<double> extents) {
  std::vector<double> lower(extents.size(), 0.0);
  return from_bounds(std::move(lower), std::move(extents));
}

Domain Domain::from_bounds(std::vector<double> lower, std::vector<double> upper) {
  if (lower.empty()) throw std::invalid_argument("domain needs dimension >= 1");
  check_same_dim(lower.size(), upper.size(), "domain");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(upper[i] > lower[i]) || !std::isfinite(upper[i]) || !std::isfinite(lower[i])) {
      throw std::invalid_argument("domain extents must be positive and finite");
    }
  }
  return Domain{std::move(lower), std::move(upper)};
}

double Domain::volume() const noexcept {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

bool Domain::contains(std::span<const double> x) const noexcept {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

Box Box::from_corners(std::vector<double> lower, std::vector<double> upper) {
  check_same_dim(lower.size(), upper.size(), "box");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (upper[i] < lower[i]) throw std::invalid_argument("box needs lower <= upper componentwise");
  }
  return Box{std::move(lower), std::move(upper)};
}

double Box::volume() const noexcept {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

bool Box::contains(std::span<const double> x) const noexcept {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

bool Box::inside(const Domain& domain) const noexcept {
  if (domain.dim() != dim()) return false;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] < domain.lower[i] || upper[i] > domain.upper[i]) return false;
  }
  return true;
}

bool MarkInterval::contains(double z) const noexcept {
  const bool above = include_lo ? z >= lo : z > lo;
  const bool below = include_hi ? z <= hi : z < hi;
  return above && below;
}

MarkSet::MarkSet(std::vector<MarkInterval> parts) : parts_(std::move(parts)) {
  for (const auto& p : parts_) {
    if (p.contains(0.0)) throw std::invalid_argument("mark set must not contain 0");
  }
}

MarkSet MarkSet::positive() {
  return MarkSet({{0.0, std::numeric_limits<double>::infinity(), false, false}});
}

MarkSet MarkSet::negative() {
  return MarkSet({{-std::numeric_limits<double>::infinity(), 0.0, false, false}});
}

MarkSet MarkSet::away_from_zero(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("away_from_zero needs eps > 0");
  const double inf = std::numeric_limits<double>::infinity();
  return MarkSet({{-inf, -eps, false, true}, {eps, inf, true, false}});
}

bool MarkSet::contains(double z) const noexcept {
  return std::any_of(parts_.begin(), parts_.end(), [z](const MarkInterval& p) { return p.contains(z); });
}

LevySheetSimulator::LevySheetSimulator(std::shared_ptr<const LevyMeasure> measure, Domain domain, double epsilon)
    : measure_(std::move(measure)), domain_(std::move(domain)), epsilon_(epsilon) {
  if (!measure_) throw std::invalid_argument("sheet simulator needs a measure");
  if (!(epsilon_ >= 0.0)) throw std::invalid_argument("truncation epsilon must be >= 0");
  sampler_ = measure_->mark_sampler(epsilon_);
  intensity_ = sampler_.total_mass();
  drift_ = restricted_first_moment(*measure_, epsilon_);
  omitted_ = measure_->small_jump_variance(epsilon_);
}

LevySheetPath LevySheetSimulator::simulate(std::uint64_t seed, std::uint64_t sample) const {
  LevySheetPath path;
  path.measure = measure_;
  path.domain = domain_;
  path.epsilon = epsilon_;
  path.drift_rate = drift_;
  path.jump_intensity = intensity_;
  path.omitted_small_jump_variance = omitted_;
  path.seed = seed;
  path.sample = sample;

  CounterRng count_rng(seed, Stream::count, sample);
  const std::uint64_t count = intensity_ > 0.0 ? count_rng.poisson(intensity_ * domain_.volume()) : 0;
  const std::size_t n = domain_.dim();
  path.locations.resize(count * n);
  path.marks.resize(count);
  CounterRng loc_rng(seed, Stream::location, sample);
  CounterRng mark_rng(seed, Stream::mark, sample);
  for (std::uint64_t k = 0; k < count; ++k) {
    for (std::size_t d = 0; d < n; ++d) {
      path.locations[k * n + d] = loc_rng.uniform(domain_.lower[d], domain_.upper[d]);
    }
    path.marks[k] = sampler_.sample(mark_rng);
  }
  return path;
}

LevySheetPath simulate_levy_sheet(std::shared_ptr<const LevyMeasure> measure, const Domain& domain,
                                  double epsilon, std::uint64_t seed, std::uint64_t sample) {
  return LevySheetSimulator(std::move(measure), domain, epsilon).simulate(seed, sample);
}

LevySheetPath make_levy_path(std::shared_ptr<const LevyMeasure> measure, const Domain& domain, double epsilon,
                             std::vector<double> locations, std::vector<double> marks) {
  if (!measure) throw std::invalid_argument("path needs a measure");
  if (locations.size() != marks.size() * domain.dim()) {
    throw std::invalid_argument("jump locations do not match marks and dimension");
  }
  LevySheetPath path;
  path.measure = measure;
  path.domain = domain;
  path.epsilon = epsilon;
  path.locations = std::move(locations);
  path.marks = std::move(marks);
  for (std::size_t k = 0; k < path.jump_count(); ++k) {
    if (!domain.contains(path.location(k))) throw std::invalid_argument("jump location outside domain");
    if (path.marks[k] == 0.0 || std::abs(path.marks[k]) < epsilon) {
      throw std::invalid_argument("jump marks must be nonzero and at least epsilon in size");
    }
  }
  path.drift_rate = restricted_first_moment(*measure, epsilon);
  path.jump_intensity = measure->mass(epsilon);
  path.omitted_small_jump_variance = measure->small_jump_variance(epsilon);
  return path;
}

double sheet_value(const LevySheetPath& path, std::span<const double> x) {
  const std::size_t n = path.dim();
  check_same_dim(x.size(), n, "sheet_value");
  double volume = 1.0;
  for (std::size_t d = 0; d < n; ++d) {
    if (x[d] < 0.0 || x[d] > path.domain.upper[d] || path.domain.lower[d] > 0.0) {
      throw std::out_of_range("sheet_value: point outside the simulated domain");
    }
    volume *= x[d];
  }
  double jumps = 0.0;
  for (std::size_t k = 0; k < path.jump_count(); ++k) {
    const auto loc = path.location(k);
    bool below = true;
    for (std::size_t d = 0; d < n && below; ++d) below = loc[d] >= 0.0 && loc[d] <= x[d];
    if (below) jumps += path.marks[k];
  }
  return jumps - path.drift_rate * volume;
}

double box_increment(const LevySheetPath& path, const Box& box) {
  const std::size_t n = path.dim();
  check_same_dim(box.dim(), n, "box_increment");
  std::vector<double> corner(n);
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int lower_count = 0;
    for (std::size_t d = 0; d < n; ++d) {
      const bool upper = (mask >> d) & 1u;
      corner[d] = upper ? box.upper[d] : box.lower[d];
      if (!upper) ++lower_count;
    }
    total += (lower_count % 2 == 0 ? 1.0 : -1.0) * sheet_value(path, corner);
  }
  return total;
}

double box_increment_direct(const LevySheetPath& path, const Box& box) {
  check_same_dim(box.dim(), path.dim(), "box_increment_direct");
  double jumps = 0.0;
  for (std::size_t k = 0; k < path.jump_count(); ++k) {
    if (box.contains(path.location(k))) jumps += path.marks[k];
  }
  return jumps - path.drift_rate * box.volume();
}

std::size_t jump_count(const LevySheetPath& path, const Box& box, const MarkSet& marks) {
  check_same_dim(box.dim(), path.dim(), "jump_count");
  std::size_t count = 0;
  for (std::size_t k = 0; k < path.jump_count(); ++k) {
    if (box.contains(path.location(k)) && marks.contains(path.marks[k])) ++count;
  }
  return count;
}

CompensatorRule CompensatorRule::build(const Domain& domain, const LevyMeasure& measure, double epsilon,
                                       std::size_t nodes_per_panel, double max_panel_width) {
  CompensatorRule rule;
  rule.dim_ = domain.dim();
  std::vector<QuadratureRule> axes;
  for (std::size_t d = 0; d < domain.dim(); ++d) {
    axes.push_back(composite_gauss_legendre(domain.lower[d], domain.upper[d], nodes_per_panel, max_panel_width));
  }
  rule.space_ = tensor_rule(axes);
  rule.mark_nodes_ = measure.restricted_nodes(epsilon);
  const std::size_t total = rule.space_.size() * rule.mark_nodes_.size();
  rule.points_.reserve(total * rule.dim_);
  rule.marks_.reserve(total);
  rule.weights_.reserve(total);
  for (std::size_t s = 0; s < rule.space_.size(); ++s) {
    const auto x = rule.space_.point(s);
    for (const auto& a : rule.mark_nodes_) {
      rule.points_.insert(rule.points_.end(), x.begin(), x.end());
      rule.marks_.push_back(a.z);
      rule.weights_.push_back(rule.space_.weights[s] * a.weight);
    }
  }
  return rule;
}

double jump_sum(const LevySheetPath& path, const JumpFunction& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k < path.jump_count(); ++k) sum += f(path.location(k), path.marks[k]);
  return sum;
}

double compensated_integral(const LevySheetPath& path, const JumpFunction& f, const CompensatorRule& rule) {
  return jump_sum(path, f) - rule.integrate(f);
}

double compensated_integral(const LevySheetPath& path, const JumpFunction& f) {
  return compensated_integral(path, f, CompensatorRule::build(path.domain, *path.measure, path.epsilon));
}

CfReport empirical_cf_check(std::shared_ptr<const LevyMeasure> measure, const Domain& domain, const Box& box,
                            std::span<const double> u_grid, std::size_t n_seeds, std::uint64_t seed,
                            unsigned workers, double epsilon) {
  if (!box.inside(domain)) throw std::invalid_argument("cf check box must lie inside the domain");
  const LevySheetSimulator sim(measure, domain, epsilon);
  const SampleMatrix increments = run_samples(n_seeds, 1, workers, [&](std::size_t i, std::span<double> row) {
    row[0] = box_increment_direct(sim.simulate(seed, i), box);
  });

  const auto restricted = measure->restricted_nodes(epsilon);
  CfReport report;
  report.samples = n_seeds;
  const auto n = static_cast<double>(n_seeds);
  for (double u : u_grid) {
    CfPoint pt;
    pt.u = u;
    double sum_re = 0.0, sum_im = 0.0;
    for (std::size_t i = 0; i < n_seeds; ++i) {
      const double phase = u * increments.data[i];
      sum_re += std::cos(phase);
      sum_im += std::sin(phase);
    }
    pt.empirical = {sum_re / n, sum_im / n};
    double ss = 0.0;
    for (std::size_t i = 0; i < n_seeds; ++i) {
      const double phase = u * increments.data[i];
      const double dr = std::cos(phase) - pt.empirical.real();
      const double di = std::sin(phase) - pt.empirical.imag();
      ss += dr * dr + di * di;
    }
    std::complex<double> psi_u{0.0, 0.0};
    for (const auto& a : restricted) {
      const double t = u * a.z;
      const double s = std::sin(0.5 * t);
      psi_u += a.weight * std::complex<double>(-2.0 * s * s, std::sin(t) - t);
    }
    pt.target = std::exp(box.volume() * psi_u);
    pt.deviation = std::abs(pt.empirical - pt.target);
    pt.envelope = n_seeds > 1 ? 3.0 * std::sqrt(ss / (n - 1.0) / n) : 0.0;
    pt.within = pt.deviation <= pt.envelope || pt.deviation == 0.0;
    report.max_deviation = std::max(report.max_deviation, pt.deviation);
    report.all_within = report.all_within && pt.within;
    report.points.push_back(pt);
  }
  return report;
}

SheetGrid SheetGrid::uniform(const Domain& domain, std::span<const std::size_t> cells_per_axis) {
  check_same_dim(domain.dim(), cells_per_axis.size(), "SheetGrid::uniform");
  SheetGrid grid;
  for (std::size_t d = 0; d < domain.dim(); ++d) {
    const std::size_t cells = cells_per_axis[d];
    if (cells == 0) throw std::invalid_argument("grid needs at least one cell per axis");
    std::vector<double> axis(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
      axis[i] = domain.lower[d] + (domain.upper[d] - domain.lower[d]) * static_cast<double>(i) / cells;
    }
    axis.back() = domain.upper[d];
    grid.axes.push_back(std::move(axis));
  }
  return grid;
}

std::size_t SheetGrid::cell_count() const noexcept {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size() - 1;
  return n;
}

std::size_t SheetGrid::node_count() const noexcept {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

double SheetGrid::cell_volume(std::size_t flat_cell) const {
  double v = 1.0;
  for (std::size_t d = axes.size(); d-- > 0;) {
    const std::size_t cells = axes[d].size() - 1;
    const std::size_t i = flat_cell % cells;
    flat_cell /= cells;
    v *= axes[d][i + 1] - axes[d][i];
  }
  return v;
}

void brownian_increments(std::span<const double> sqrt_cell_volumes, std::uint64_t seed, std::uint64_t sample,
                         std::span<double> out) {
  CounterRng rng(seed, Stream::gaussian, sample);
  for (std::size_t c = 0; c < sqrt_cell_volumes.size(); ++c) out[c] = sqrt_cell_volumes[c] * rng.normal();
}

BrownianSheetPath simulate_brownian_sheet(const SheetGrid& grid, std::uint64_t seed, std::uint64_t sample) {
  if (grid.axes.empty()) throw std::invalid_argument("Brownian sheet grid needs dimension >= 1");
  for (const auto& axis : grid.axes) {
    if (axis.size() < 2) throw std::invalid_argument("each grid axis needs at least two points");
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!(axis[i] > axis[i - 1])) throw std::invalid_argument("grid axes must be strictly increasing");
    }
  }
  BrownianSheetPath path;
  path.grid = grid;
  path.seed = seed;
  path.sample = sample;
  const std::size_t cells = grid.cell_count();
  std::vector<double> sqrt_vol(cells);
  for (std::size_t c = 0; c < cells; ++c) sqrt_vol[c] = std::sqrt(grid.cell_volume(c));
  path.increments.resize(cells);
  brownian_increments(sqrt_vol, seed, sample, path.increments);

  // Node values: zero on the lower faces, cumulative sums of cell increments.
  const std::size_t n = grid.dim();
  std::vector<std::size_t> node_dims(n), cell_dims(n);
  for (std::size_t d = 0; d < n; ++d) {
    node_dims[d] = grid.axes[d].size();
    cell_dims[d] = node_dims[d] - 1;
  }
  path.values.assign(grid.node_count(), 0.0);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t node = 0;
    for (std::size_t d = 0; d < n; ++d) node = node * node_dims[d] + idx[d] + 1;
    path.values[node] = path.increments[c];
    for (std::size_t d = n; d-- > 0;) {
      if (++idx[d] < cell_dims[d]) break;
      idx[d] = 0;
    }
  }
  std::size_t stride = 1;
  for (std::size_t d = n; d-- > 0;) {
    const std::size_t len = node_dims[d];
    const std::size_t outer = path.values.size() / (len * stride);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t s = 0; s < stride; ++s) {
        const std::size_t base = o * len * stride + s;
        for (std::size_t i = 1; i < len; ++i) path.values[base + i * stride] += path.values[base + (i - 1) * stride];
      }
    }
    stride *= len;
  }
  return path;
}

double BrownianSheetPath::value_at_node(std::span<const std::size_t> index) const {
  check_same_dim(index.size(), grid.dim(), "value_at_node");
  std::size_t flat = 0;
  for (std::size_t d = 0; d < grid.dim(); ++d) {
    if (index[d] >= grid.axes[d].size()) throw std::out_of_range("grid node index out of range");
    flat = flat * grid.axes[d].size() + index[d];
  }
  return values[flat];
}

double BrownianSheetPath::value(std::span<const double> x) const {
  check_same_dim(x.size(), grid.dim(), "BrownianSheetPath::value");
  std::vector<std::size_t> idx(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) idx[d] = find_node(grid.axes[d], x[d]);
  return value_at_node(idx);
}

double box_increment(const BrownianSheetPath& path, const Box& box) {
  const std::size_t n = path.grid.dim();
  check_same_dim(box.dim(), n, "box_increment");
  std::vector<double> corner(n);
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int lower_count = 0;
    for (std::size_t d = 0; d < n; ++d) {
      const bool upper = (mask >> d) & 1u;
      corner[d] = upper ? box.upper[d] : box.lower[d];
      if (!upper) ++lower_count;
    }
    total += (lower_count % 2 == 0 ? 1.0 : -1.0) * path.value(corner);
  }
  return total;
}

}  // namespace levy
