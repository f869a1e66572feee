#include "levy/whitenoise.hpp"

#include "levy/quadrature.hpp"
#include "levy/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levy {

namespace {

void check_point(const WhiteNoiseBasis& basis, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(basis.dim())) throw std::invalid_argument("point dimension mismatch");
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("expansion points must lie in R_+^n");
  }
}

void check_truncation(const WhiteNoiseBasis& basis, std::size_t J) {
  if (J < 1) throw std::invalid_argument("truncation J must be >= 1");
  if (J > basis.ordering->size()) {
    throw std::invalid_argument("truncation J = " + std::to_string(J) + " exceeds the basis ordering size " +
                                std::to_string(basis.ordering->size()));
  }
}

int max_entry(const TensorBasisOrdering& ordering, std::size_t J) {
  int m = 1;
  for (std::size_t i = 1; i <= J; ++i) {
    for (int b : ordering.label(i)) m = std::max(m, b);
  }
  return m;
}

// Hermite functions oscillate faster with the index; keep roughly the same
// number of nodes per oscillation as the base density gives at index 400.
int effective_nodes_per_unit(int base, int max_index) {
  const double factor = std::ceil(std::sqrt(static_cast<double>(max_index) / 400.0));
  return base * static_cast<int>(std::max(1.0, factor));
}

std::vector<double> axis_integrals(double upper, int count, int nodes_per_unit) {
  std::vector<double> out(static_cast<std::size_t>(count), 0.0);
  if (upper == 0.0) return out;
  const auto rule = composite_gauss_legendre(0.0, upper, static_cast<std::size_t>(nodes_per_unit), 1.0);
  std::vector<double> values(static_cast<std::size_t>(count) * rule.size());
  hermite_functions_batch(count, rule.nodes, values);
  for (int b = 0; b < count; ++b) {
    out[b] = simd::dot(std::span<const double>(values.data() + static_cast<std::size_t>(b) * rule.size(), rule.size()),
                       rule.weights);
  }
  return out;
}

std::vector<double> product_over_labels(const TensorBasisOrdering& ordering, std::size_t J,
                                        const std::vector<std::vector<double>>& axis) {
  std::vector<double> out(J);
  for (std::size_t i = 1; i <= J; ++i) {
    const auto beta = ordering.label(i);
    double v = 1.0;
    for (std::size_t l = 0; l < beta.size(); ++l) v *= axis[l][static_cast<std::size_t>(beta[l] - 1)];
    out[i - 1] = v;
  }
  return out;
}

}  // namespace

WhiteNoiseBasis WhiteNoiseBasis::make(std::shared_ptr<const LevyMeasure> measure, int dim, std::size_t basis_count,
                                      int poly_degree) {
  if (!measure) throw std::invalid_argument("white noise basis needs a measure");
  WhiteNoiseBasis b;
  b.system = std::make_shared<const OrthoPolySystem>(OrthoPolySystem::build(*measure, poly_degree));
  b.ordering = std::make_shared<const TensorBasisOrdering>(dim, basis_count);
  b.m2 = b.system->m2();
  b.measure = std::move(measure);
  return b;
}

ChaosCoefficients WhiteNoiseBasis::empty_coefficients() const {
  return ChaosCoefficients(measure->name(), dim(), j_nu());
}

std::size_t default_truncation(int dim) {
  if (dim == 1) return 200;
  if (dim == 2) return 61 * 60 / 2;
  throw std::invalid_argument("default truncation defined for n = 1, 2");
}

std::vector<double> hermite_box_integrals(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J) {
  check_point(basis, x);
  check_truncation(basis, J);
  const int count = max_entry(*basis.ordering, J);
  const int npu = effective_nodes_per_unit(basis.nodes_per_unit, count);
  std::vector<std::vector<double>> axis;
  for (double xl : x) axis.push_back(axis_integrals(xl, count, npu));
  return product_over_labels(*basis.ordering, J, axis);
}

std::vector<double> hermite_point_values(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J) {
  if (x.size() != static_cast<std::size_t>(basis.dim())) throw std::invalid_argument("point dimension mismatch");
  check_truncation(basis, J);
  const int count = max_entry(*basis.ordering, J);
  std::vector<std::vector<double>> axis;
  for (double xl : x) {
    std::vector<double> v(static_cast<std::size_t>(count));
    hermite_functions(count, xl, v);
    axis.push_back(std::move(v));
  }
  return product_over_labels(*basis.ordering, J, axis);
}

ChaosCoefficients sheet_expansion(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J) {
  const auto integrals = hermite_box_integrals(basis, x, J);
  auto out = basis.empty_coefficients();
  for (std::size_t i = 1; i <= J; ++i) {
    out.set(MultiIndexAlpha::unit(kappa(static_cast<std::int64_t>(i), 1)), basis.m2 * integrals[i - 1]);
  }
  return out;
}

ChaosCoefficients levy_noise_expansion(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J) {
  const auto values = hermite_point_values(basis, x, J);
  auto out = basis.empty_coefficients();
  for (std::size_t i = 1; i <= J; ++i) {
    out.set(MultiIndexAlpha::unit(kappa(static_cast<std::int64_t>(i), 1)), basis.m2 * values[i - 1]);
  }
  return out;
}

ChaosCoefficients pnrm_noise_expansion(const WhiteNoiseBasis& basis, std::span<const double> x, double z,
                                       std::size_t J, int J_prime, bool* capped_out) {
  if (z == 0.0) throw std::invalid_argument("pnrm noise is defined for z != 0");
  if (J_prime < 1) throw std::invalid_argument("J' must be >= 1");
  const int jmax = std::min(J_prime, basis.j_nu());
  if (capped_out) *capped_out = jmax < J_prime;
  const auto values = hermite_point_values(basis, x, J);
  auto out = basis.empty_coefficients();
  for (int j = 1; j <= jmax; ++j) {
    const double pj = basis.system->p(j, z);
    for (std::size_t i = 1; i <= J; ++i) {
      out.set(MultiIndexAlpha::unit(kappa(static_cast<std::int64_t>(i), j)), values[i - 1] * pj);
    }
  }
  return out;
}

ChaosCoefficients pnrm_to_levy_reduction(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J,
                                         int J_prime) {
  if (J_prime < 1) throw std::invalid_argument("J' must be >= 1");
  const int jmax = std::min(J_prime, basis.j_nu());
  const auto values = hermite_point_values(basis, x, J);
  auto out = basis.empty_coefficients();
  for (int j = 1; j <= jmax; ++j) {
    const double moment = basis.measure->integrate([&](double zeta) { return basis.system->p(j, zeta) * zeta; });
    for (std::size_t i = 1; i <= J; ++i) {
      out.set(MultiIndexAlpha::unit(kappa(static_cast<std::int64_t>(i), j)), values[i - 1] * moment);
    }
  }
  return out;
}

double covariance_partial_sum(const WhiteNoiseBasis& basis, std::span<const double> x, std::span<const double> y,
                              std::size_t J) {
  const auto ix = hermite_box_integrals(basis, x, J);
  const auto iy = hermite_box_integrals(basis, y, J);
  double sum = 0.0;
  for (std::size_t i = 0; i < J; ++i) sum += ix[i] * iy[i];
  return basis.m2 * basis.m2 * sum;
}

double covariance_target(const WhiteNoiseBasis& basis, std::span<const double> x, std::span<const double> y) {
  check_point(basis, x);
  check_point(basis, y);
  double v = basis.measure->moment(2);
  for (std::size_t l = 0; l < x.size(); ++l) v *= std::min(x[l], y[l]);
  return v;
}

std::vector<CovariancePoint> covariance_curve(const WhiteNoiseBasis& basis, std::span<const double> x,
                                              std::span<const double> y, std::span<const std::size_t> Js) {
  if (Js.empty()) return {};
  if (!std::is_sorted(Js.begin(), Js.end())) throw std::invalid_argument("covariance curve needs increasing J");
  const std::size_t jmax = Js.back();
  const auto ix = hermite_box_integrals(basis, x, jmax);
  const auto iy = hermite_box_integrals(basis, y, jmax);
  const double target = covariance_target(basis, x, y);
  std::vector<CovariancePoint> out;
  double sum = 0.0;
  std::size_t done = 0;
  for (std::size_t J : Js) {
    for (; done < J; ++done) sum += ix[done] * iy[done];
    const double partial = basis.m2 * basis.m2 * sum;
    out.push_back({J, partial, target, target - partial});
  }
  return out;
}

RadonNikodymCheck radon_nikodym_check(const WhiteNoiseBasis& basis, std::span<const double> x, const MarkSet& marks,
                                      std::size_t J, int J_prime) {
  check_point(basis, x);
  const int jmax = std::min(J_prime, basis.j_nu());
  std::vector<Atom> mark_nodes;
  for (const auto& a : basis.measure->nodes()) {
    if (marks.contains(a.z)) mark_nodes.push_back(a);
  }

  RadonNikodymCheck out{basis.empty_coefficients(), basis.empty_coefficients(), 0.0};
  const auto box = hermite_box_integrals(basis, x, J);
  for (int j = 1; j <= jmax; ++j) {
    double pu = 0.0;
    for (const auto& a : mark_nodes) pu += a.weight * basis.system->p(j, a.z);
    for (std::size_t i = 1; i <= J; ++i) {
      out.direct.set(MultiIndexAlpha::unit(kappa(static_cast<std::int64_t>(i), j)), box[i - 1] * pu);
    }
  }

  // Integrate the pointwise pnrm coefficients over [0,x] x U on an independent
  // (finer) tensor rule.
  std::vector<QuadratureRule> axes;
  for (double xl : x) {
    axes.push_back(xl == 0.0 ? QuadratureRule{} : composite_gauss_legendre(0.0, xl, 40, 0.5));
  }
  const TensorRule space = tensor_rule(axes);
  std::vector<double> acc(J * static_cast<std::size_t>(std::max(jmax, 0)), 0.0);
  for (std::size_t q = 0; q < space.size(); ++q) {
    const auto e = hermite_point_values(basis, space.point(q), J);
    for (const auto& a : mark_nodes) {
      for (int j = 1; j <= jmax; ++j) {
        const double w = space.weights[q] * a.weight * basis.system->p(j, a.z);
        double* row = acc.data() + static_cast<std::size_t>(j - 1) * J;
        for (std::size_t i = 0; i < J; ++i) row[i] += w * e[i];
      }
    }
  }
  for (int j = 1; j <= jmax; ++j) {
    for (std::size_t i = 1; i <= J; ++i) {
      const auto alpha = MultiIndexAlpha::unit(kappa(static_cast<std::int64_t>(i), j));
      const double v = acc[static_cast<std::size_t>(j - 1) * J + (i - 1)];
      out.integrated.set(alpha, v);
      out.max_abs_difference = std::max(out.max_abs_difference, std::abs(v - out.direct.get(alpha)));
    }
  }
  return out;
}

NormTail hida_tail(const WhiteNoiseBasis& basis, ExpansionKind kind, std::span<const double> x, double z, int q,
                   std::size_t J, std::size_t J_reference) {
  if (J > J_reference) throw std::invalid_argument("hida_tail needs J <= J_reference");
  ChaosCoefficients full;
  switch (kind) {
    case ExpansionKind::sheet:
      full = sheet_expansion(basis, x, J_reference);
      break;
    case ExpansionKind::levy_noise:
      full = levy_noise_expansion(basis, x, J_reference);
      break;
    case ExpansionKind::pnrm_noise:
      full = pnrm_noise_expansion(basis, x, z, J_reference, basis.j_nu());
      break;
  }
  auto head = basis.empty_coefficients();
  for (const auto& [alpha, c] : full.terms()) {
    if (static_cast<std::size_t>(kappa_inverse(alpha.index()).first) <= J) head.set(alpha, c);
  }
  NormTail t;
  t.J = J;
  t.J_reference = J_reference;
  t.partial = hida_norm_neg_q(head, q);
  t.total = hida_norm_neg_q(full, q);
  t.tail = t.total - t.partial;
  t.relative_tail = t.total > 0.0 ? t.tail / t.total : 0.0;
  return t;
}

FirstOrderFunctional::FirstOrderFunctional(const ChaosCoefficients& coefficients, const WhiteNoiseBasis& basis,
                                           const CompensatorRule& rule)
    : basis_(basis) {
  if (rule.dim() != static_cast<std::size_t>(basis.dim())) throw std::invalid_argument("rule dimension mismatch");
  for (const auto& [alpha, c] : coefficients.terms()) {
    if (alpha.is_zero()) throw std::invalid_argument("first-order functional has no constant term");
    if (alpha.order() != 1) throw std::invalid_argument("first-order functional needs |alpha| = 1 terms only");
    const auto [i, j] = kappa_inverse(alpha.index());
    if (j > basis.j_nu()) throw std::invalid_argument("coefficient needs p_j beyond J_nu");
    index_.emplace_back(static_cast<std::size_t>(i), static_cast<int>(j));
    coeff_.push_back(c);
    for (int b : basis.ordering->label(static_cast<std::size_t>(i))) max_entry_ = std::max(max_entry_, b);
  }
  compensator_ = rule.integrate([&](std::span<const double> x, double z) { return jump_value(x, z); });
}

double FirstOrderFunctional::jump_value(std::span<const double> x, double z) const {
  const std::size_t dim = x.size();
  std::vector<double> herm(dim * static_cast<std::size_t>(max_entry_));
  for (std::size_t l = 0; l < dim; ++l) {
    hermite_functions(max_entry_, x[l], std::span<double>(herm.data() + l * max_entry_, max_entry_));
  }
  std::vector<double> p(static_cast<std::size_t>(basis_.j_nu()));
  for (int j = 1; j <= basis_.j_nu(); ++j) p[j - 1] = basis_.system->p(j, z);
  double sum = 0.0;
  for (std::size_t t = 0; t < coeff_.size(); ++t) {
    const auto beta = basis_.ordering->label(index_[t].first);
    double e = 1.0;
    for (std::size_t l = 0; l < dim; ++l) e *= herm[l * max_entry_ + static_cast<std::size_t>(beta[l] - 1)];
    sum += coeff_[t] * e * p[static_cast<std::size_t>(index_[t].second - 1)];
  }
  return sum;
}

double FirstOrderFunctional::sample(const LevySheetPath& path) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < path.jump_count(); ++k) sum += jump_value(path.location(k), path.marks[k]);
  return sum - compensator_;
}

}  // namespace levy
