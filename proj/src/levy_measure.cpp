#include "levy/levy_measure.hpp"

#include "levy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levy {

namespace {

std::vector<Atom> density_nodes(const std::function<double(double)>& density, double inner,
                                double outer, DensitySides sides, std::size_t per_side) {
  std::vector<Atom> nodes;
  if (!(outer > inner)) return nodes;
  const QuadratureRule rule = gauss_legendre(per_side, inner, outer);
  auto add_side = [&](double sign) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double z = sign * rule.nodes[i];
      const double w = rule.weights[i] * density(z);
      if (w > 0.0) nodes.push_back({z, w});
    }
  };
  if (sides != DensitySides::positive) add_side(-1.0);
  if (sides != DensitySides::negative) add_side(1.0);
  return nodes;
}

}  // namespace

LevyMeasure LevyMeasure::from_atoms(std::vector<Atom> atoms, std::string name) {
  if (atoms.empty()) throw std::invalid_argument("Levy measure needs at least one atom");
  for (const auto& a : atoms) {
    if (a.z == 0.0 || !std::isfinite(a.z)) {
      throw std::invalid_argument("atom at z=0 forbidden (nu lives on R \\ {0})");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw std::invalid_argument("atom weights must be positive and finite");
    }
  }
  LevyMeasure m;
  m.kind_ = Kind::discrete_atoms;
  m.name_ = std::move(name);
  m.nodes_ = std::move(atoms);
  m.inner_ = std::abs(m.nodes_.front().z);
  m.outer_ = m.inner_;
  for (const auto& a : m.nodes_) {
    m.inner_ = std::min(m.inner_, std::abs(a.z));
    m.outer_ = std::max(m.outer_, std::abs(a.z));
  }
  return m;
}

LevyMeasure LevyMeasure::from_density(std::string name, std::function<double(double)> density,
                                      double inner, double outer, DensitySides sides,
                                      std::size_t nodes_per_side) {
  if (!(inner > 0.0)) throw std::invalid_argument("density support must stay away from 0 (inner > 0)");
  if (!(outer > inner) || !std::isfinite(outer)) {
    throw std::invalid_argument("density support needs inner < outer < infinity");
  }
  if (nodes_per_side == 0) throw std::invalid_argument("density quadrature needs nodes");
  LevyMeasure m;
  m.kind_ = Kind::density_on_interval;
  m.name_ = std::move(name);
  m.density_ = std::make_shared<const std::function<double(double)>>(std::move(density));
  m.inner_ = inner;
  m.outer_ = outer;
  m.sides_ = sides;
  m.nodes_per_side_ = nodes_per_side;
  m.nodes_ = density_nodes(*m.density_, inner, outer, sides, nodes_per_side);
  if (m.nodes_.empty()) throw std::invalid_argument("density integrates to zero on its support");
  for (const auto& a : m.nodes_) {
    if (!std::isfinite(a.weight)) throw std::invalid_argument("density is not finite on its support");
  }
  return m;
}

std::vector<Atom> LevyMeasure::restricted_nodes(double eps) const {
  if (kind_ == Kind::discrete_atoms || eps <= inner_) {
    std::vector<Atom> out;
    for (const auto& a : nodes_) {
      if (std::abs(a.z) >= eps) out.push_back(a);
    }
    return out;
  }
  return density_nodes(*density_, std::max(inner_, eps), outer_, sides_, nodes_per_side_);
}

double LevyMeasure::moment(int p) const {
  if (p < 1) throw std::invalid_argument("moment order must be >= 1");
  double sum = 0.0;
  for (const auto& a : nodes_) sum += a.weight * std::pow(a.z, p);
  return sum;
}

double LevyMeasure::mass(double eps) const {
  double sum = 0.0;
  for (const auto& a : restricted_nodes(eps)) sum += a.weight;
  return sum;
}

double LevyMeasure::small_jump_variance(double eps) const {
  double kept = 0.0;
  for (const auto& a : restricted_nodes(eps)) kept += a.weight * a.z * a.z;
  return std::max(0.0, moment(2) - kept);
}

std::complex<double> LevyMeasure::psi(double w) const {
  // e^{iwz} - 1 - iwz, with the real part written as -2 sin^2(wz/2) so that
  // small arguments keep full relative accuracy and Re psi <= 0 exactly.
  double re = 0.0;
  double im = 0.0;
  for (const auto& a : nodes_) {
    const double t = w * a.z;
    const double s = std::sin(0.5 * t);
    re += a.weight * (-2.0 * s * s);
    im += a.weight * (std::sin(t) - t);
  }
  return {re, im};
}

ExponentialMoment LevyMeasure::exponential_moment(double eps, double lambda) const {
  if (!(eps > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("exponential moment needs eps > 0 and lambda > 0");
  }
  double sum = 0.0;
  for (const auto& a : restricted_nodes(eps)) sum += a.weight * std::exp(lambda * std::abs(a.z));
  return {std::isfinite(sum), sum};
}

double LevyMeasure::density_at(double z) const {
  if (kind_ == Kind::discrete_atoms) return 0.0;
  const double r = std::abs(z);
  if (r < inner_ || r > outer_) return 0.0;
  if (z < 0 && sides_ == DensitySides::positive) return 0.0;
  if (z > 0 && sides_ == DensitySides::negative) return 0.0;
  return (*density_)(z);
}

MarkSampler LevyMeasure::mark_sampler(double eps) const {
  MarkSampler sampler;
  if (kind_ == Kind::discrete_atoms) {
    double running = 0.0;
    for (const auto& a : nodes_) {
      if (std::abs(a.z) < eps) continue;
      running += a.weight;
      sampler.atom_values_.push_back(a.z);
      sampler.cumulative_.push_back(running);
    }
    sampler.mass_ = running;
    return sampler;
  }

  sampler.density_ = density_;
  const double lo = std::max(inner_, eps);
  if (!(outer_ > lo)) return sampler;
  const QuadratureRule rule = gauss_legendre(nodes_per_side_, lo, outer_);
  double running = 0.0;
  auto add_side = [&](double sign) {
    MarkSampler::Side side{lo, outer_, sign, 0.0};
    double side_mass = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) side_mass += rule.weights[i] * (*density_)(sign * rule.nodes[i]);
    // Rejection envelope from a dense scan plus headroom; sample() verifies it.
    constexpr int kScan = 4096;
    for (int i = 0; i <= kScan; ++i) {
      const double z = lo + (outer_ - lo) * i / kScan;
      side.envelope = std::max(side.envelope, (*density_)(sign * z));
    }
    side.envelope *= 1.1;
    if (side_mass > 0.0) {
      running += side_mass;
      sampler.sides_.push_back(side);
      sampler.cumulative_.push_back(running);
    }
  };
  if (sides_ != DensitySides::positive) add_side(-1.0);
  if (sides_ != DensitySides::negative) add_side(1.0);
  sampler.mass_ = running;
  return sampler;
}

double MarkSampler::sample(CounterRng& rng) const {
  if (cumulative_.empty()) throw std::logic_error("mark sampler has no mass");
  const std::size_t k = rng.categorical(cumulative_);
  if (!density_) return atom_values_[k];
  const Side& side = sides_[k];
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double r = rng.uniform(side.lo, side.hi);
    const double f = (*density_)(side.sign * r);
    if (f > side.envelope) throw std::logic_error("density exceeds its rejection envelope");
    if (rng.uniform() * side.envelope <= f) return side.sign * r;
  }
  throw std::runtime_error("mark rejection sampling did not terminate");
}

MomentTable::MomentTable(const LevyMeasure& measure, int max_order) {
  if (max_order < 2) throw std::invalid_argument("moment table needs order >= 2");
  moments_.resize(static_cast<std::size_t>(max_order));
  for (int p = 1; p <= max_order; ++p) moments_[p - 1] = measure.moment(p);
  second_moment_ = moments_[1];
  if (!(second_moment_ > 0.0)) throw std::invalid_argument("second moment of nu must be positive");
  m2_ = std::sqrt(second_moment_);
}

double MomentTable::moment(int p) const {
  if (p < 1 || p > max_order()) throw std::out_of_range("moment order outside cached table");
  return moments_[p - 1];
}

std::function<double(double)> named_density(const std::string& name, double scale, double parameter) {
  if (!(scale > 0.0)) throw std::invalid_argument("density scale must be positive");
  if (name == "uniform") return [scale](double) { return scale; };
  if (name == "power") {
    return [scale, parameter](double z) { return scale * std::pow(std::abs(z), -1.0 - parameter); };
  }
  if (name == "exponential") {
    if (!(parameter > 0.0)) throw std::invalid_argument("exponential density needs a positive rate");
    return [scale, parameter](double z) { return scale * std::exp(-parameter * std::abs(z)) / std::abs(z); };
  }
  throw std::invalid_argument("unknown density '" + name + "' (expected uniform, power, exponential)");
}

}  // namespace levy
