#pragma once

#include "levy/rng.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace levy {

// A point mass (jump size z, weight w) of a Levy measure. Density measures are
// carried by the same type: their quadrature nodes with density-weighted weights.
struct Atom {
  double z = 0.0;
  double weight = 0.0;
};

enum class DensitySides { both, negative, positive };

struct ExponentialMoment {
  bool finite = true;
  double value = 0.0;
};

class MarkSampler;

// Finite-activity Levy measure with bounded support away from zero: either a
// finite atom list, or a density on [-outer, -inner] u [inner, outer] with a
// composite Gauss-Legendre rule attached. Every integral against nu is a
// finite weighted sum over nodes().
class LevyMeasure {
 public:
  enum class Kind { discrete_atoms, density_on_interval };

  static LevyMeasure from_atoms(std::vector<Atom> atoms, std::string name = "atoms");

  static LevyMeasure from_density(std::string name, std::function<double(double)> density,
                                  double inner, double outer,
                                  DensitySides sides = DensitySides::both,
                                  std::size_t nodes_per_side = 64);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  std::span<const Atom> nodes() const noexcept { return nodes_; }

  // Nodes of the restriction of nu to {|z| >= eps}.
  std::vector<Atom> restricted_nodes(double eps) const;

  double moment(int p) const;
  double mass(double eps = 0.0) const;
  // Variance of the jumps dropped by truncation at eps: int_{|z|<eps} z^2 nu(dz).
  double small_jump_variance(double eps) const;

  std::complex<double> psi(double w) const;

  ExponentialMoment exponential_moment(double eps, double lambda) const;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (const auto& a : nodes_) sum += a.weight * f(a.z);
    return sum;
  }

  template <class F, class G>
  double nu_inner(F&& f, G&& g) const {
    double sum = 0.0;
    for (const auto& a : nodes_) sum += a.weight * f(a.z) * g(a.z);
    return sum;
  }

  template <class F, class G>
  double rho_inner(F&& f, G&& g) const {
    double sum = 0.0;
    for (const auto& a : nodes_) sum += a.weight * a.z * a.z * f(a.z) * g(a.z);
    return sum;
  }

  MarkSampler mark_sampler(double eps) const;

  double density_at(double z) const;
  double inner_radius() const noexcept { return inner_; }
  double outer_radius() const noexcept { return outer_; }
  DensitySides sides() const noexcept { return sides_; }
  std::size_t nodes_per_side() const noexcept { return nodes_per_side_; }

 private:
  LevyMeasure() = default;

  Kind kind_ = Kind::discrete_atoms;
  std::string name_;
  std::vector<Atom> nodes_;
  std::shared_ptr<const std::function<double(double)>> density_;
  double inner_ = 0.0;
  double outer_ = 0.0;
  DensitySides sides_ = DensitySides::both;
  std::size_t nodes_per_side_ = 0;
};

// Draws marks from nu restricted to {|z| >= eps}, normalized.
class MarkSampler {
 public:
  double total_mass() const noexcept { return mass_; }
  double sample(CounterRng& rng) const;

 private:
  friend class LevyMeasure;

  struct Side {
    double lo = 0.0;
    double hi = 0.0;
    double sign = 1.0;
    double envelope = 0.0;
  };

  double mass_ = 0.0;
  std::vector<double> atom_values_;
  std::vector<double> cumulative_;
  std::vector<Side> sides_;
  std::shared_ptr<const std::function<double(double)>> density_;
};

// Cached moments of nu up to max_order.
class MomentTable {
 public:
  explicit MomentTable(const LevyMeasure& measure, int max_order = 12);

  double moment(int p) const;
  int max_order() const noexcept { return static_cast<int>(moments_.size()); }
  double second_moment() const noexcept { return second_moment_; }
  double m2() const noexcept { return m2_; }

 private:
  std::vector<double> moments_;
  double second_moment_ = 0.0;
  double m2_ = 0.0;
};

// Named densities used by the configuration layer.
//   uniform:     scale
//   power:       scale * |z|^(-1 - parameter)      (tempered-stable-like shape)
//   exponential: scale * exp(-parameter |z|) / |z|  (gamma-like shape)
std::function<double(double)> named_density(const std::string& name, double scale, double parameter);

}  // namespace levy
