#include "levy/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace levy {

namespace {

struct GlTableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  std::unique_ptr<gsl_integration_glfixed_table, GlTableDeleter> table(
      gsl_integration_glfixed_table_alloc(n));
  if (!table) throw std::runtime_error("gauss_legendre: table allocation failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(a, b, i, &rule.nodes[i], &rule.weights[i], table.get());
  }
  return rule;
}

QuadratureRule composite_gauss_legendre_panels(double a, double b, std::size_t panels,
                                               std::size_t nodes_per_panel) {
  if (panels == 0) throw std::invalid_argument("composite_gauss_legendre: zero panels");
  const QuadratureRule ref = gauss_legendre(nodes_per_panel, 0.0, 1.0);
  QuadratureRule rule;
  rule.nodes.reserve(panels * nodes_per_panel);
  rule.weights.reserve(panels * nodes_per_panel);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double left = a + width * static_cast<double>(p);
    for (std::size_t i = 0; i < nodes_per_panel; ++i) {
      rule.nodes.push_back(left + width * ref.nodes[i]);
      rule.weights.push_back(width * ref.weights[i]);
    }
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, std::size_t nodes_per_panel,
                                        double max_panel_width) {
  const double length = std::abs(b - a);
  const auto panels =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / max_panel_width - 1e-12)));
  return composite_gauss_legendre_panels(a, b, panels, nodes_per_panel);
}

QuadratureRule singular_power_rule(std::size_t n, double width, double power) {
  if (!(power > 0.0)) throw std::invalid_argument("singular_power_rule: power must be positive");
  // s = u^(1/p), ds = (1/p) u^(1/p - 1) du, s^(p-1) ds = (1/p) du.
  const QuadratureRule u_rule = gauss_legendre(n, 0.0, std::pow(width, power));
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = std::pow(u_rule.nodes[i], 1.0 / power);
    rule.weights[i] = u_rule.weights[i] / power;
  }
  return rule;
}

TensorRule tensor_rule(std::span<const QuadratureRule> axes) {
  TensorRule rule;
  rule.dim = axes.size();
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.size();
  rule.points.resize(total * rule.dim);
  rule.weights.resize(total);
  std::vector<std::size_t> idx(rule.dim, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double w = 1.0;
    for (std::size_t d = 0; d < rule.dim; ++d) {
      rule.points[flat * rule.dim + d] = axes[d].nodes[idx[d]];
      w *= axes[d].weights[idx[d]];
    }
    rule.weights[flat] = w;
    for (std::size_t d = rule.dim; d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
  return rule;
}

}  // namespace levy
