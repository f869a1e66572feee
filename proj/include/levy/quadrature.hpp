#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levy {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

// Composite Gauss-Legendre with equal panels of width at most max_panel_width.
QuadratureRule composite_gauss_legendre(double a, double b, std::size_t nodes_per_panel,
                                        double max_panel_width = 1.0);

// Same, with the panel count given explicitly.
QuadratureRule composite_gauss_legendre_panels(double a, double b, std::size_t panels,
                                               std::size_t nodes_per_panel);

// Gauss-Jacobi-free treatment of an integrable endpoint singularity:
// integrates s^(power - 1) * f(s) over [0, width] via s = u^(1/power), which
// turns the weight into the exact constant 1/power and leaves a smooth
// integrand in u. Returned weights already contain the s^(power - 1) factor.
QuadratureRule singular_power_rule(std::size_t n, double width, double power);

// Tensor-product rule on a box; points are stored row-major (point-major).
struct TensorRule {
  std::size_t dim = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> point(std::size_t i) const noexcept {
    return {points.data() + i * dim, dim};
  }
};

TensorRule tensor_rule(std::span<const QuadratureRule> axes);

}  // namespace levy
