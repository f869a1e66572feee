#include "levy/basis.hpp"

#include "levy/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace levy {

namespace {

const double kPiQuarter = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));

void check_hermite_index(int n) {
  if (n < 1) throw std::out_of_range("hermite function index must be >= 1");
  if (n > kMaxHermiteIndex) {
    throw std::out_of_range("hermite function index " + std::to_string(n) + " above supported range");
  }
}

}  // namespace

double hermite_poly(int n, double x) {
  if (n < 0) throw std::out_of_range("hermite polynomial degree must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_functions(int count, double x, std::span<double> out) {
  if (count <= 0) return;
  check_hermite_index(count);
  if (out.size() < static_cast<std::size_t>(count)) throw std::invalid_argument("hermite_functions: output too small");
  // Run the normalized recurrence without the Gaussian factor and carry its
  // logarithm separately; rescale whenever values grow large.
  double log_scale = -0.5 * x * x;
  double prev = 0.0;
  double cur = kPiQuarter;
  std::vector<double> raw(static_cast<std::size_t>(count));
  std::vector<double> scale_at(static_cast<std::size_t>(count));
  raw[0] = cur;
  scale_at[0] = log_scale;
  for (int k = 0; k + 1 < count; ++k) {
    const double kk = k;
    double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e200) {
      cur *= 1e-200;
      prev *= 1e-200;
      log_scale += 200.0 * std::numbers::ln10;
    }
    raw[k + 1] = cur;
    scale_at[k + 1] = log_scale;
  }
  for (int k = 0; k < count; ++k) out[k] = raw[k] * std::exp(scale_at[k]);
}

double hermite_function(int n, double x) {
  check_hermite_index(n);
  double log_scale = -0.5 * x * x;
  double prev = 0.0;
  double cur = kPiQuarter;
  for (int k = 0; k + 1 < n; ++k) {
    const double kk = k;
    const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e200) {
      cur *= 1e-200;
      prev *= 1e-200;
      log_scale += 200.0 * std::numbers::ln10;
    }
  }
  return cur * std::exp(log_scale);
}

void hermite_functions_batch(int count, std::span<const double> xs, std::span<double> out) {
  if (count <= 0 || xs.empty()) return;
  check_hermite_index(count);
  const std::size_t n = xs.size();
  if (out.size() < static_cast<std::size_t>(count) * n) {
    throw std::invalid_argument("hermite_functions_batch: output too small");
  }
  const bool in_range = std::all_of(xs.begin(), xs.end(), [](double x) {
    return std::abs(x) <= simd::kHermiteBatchMaxAbsX;
  });
  if (in_range) {
    simd::kernels().hermite_functions(static_cast<std::size_t>(count), xs.data(), n, out.data());
    return;
  }
  std::vector<double> column(static_cast<std::size_t>(count));
  for (std::size_t p = 0; p < n; ++p) {
    hermite_functions(count, xs[p], column);
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k) * n + p] = column[k];
  }
}

std::int64_t kappa(std::int64_t i, std::int64_t j) {
  if (i < 1 || j < 1) throw std::out_of_range("kappa is defined on N x N (indices >= 1)");
  return j + (i + j - 2) * (i + j - 1) / 2;
}

std::pair<std::int64_t, std::int64_t> kappa_inverse(std::int64_t k) {
  if (k < 1) throw std::out_of_range("kappa_inverse needs k >= 1");
  // Diagonal d = i + j - 1 holds the values (d-1)d/2 + 1 .. d(d+1)/2.
  auto d = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(k)) - 1.0) / 2.0);
  while (d * (d + 1) / 2 < k) ++d;
  while (d > 1 && (d - 1) * d / 2 >= k) --d;
  const std::int64_t j = k - (d - 1) * d / 2;
  const std::int64_t i = d + 1 - j;
  return {i, j};
}

TensorBasisOrdering::TensorBasisOrdering(int dim, std::size_t count) : dim_(dim), count_(count) {
  if (dim < 1) throw std::invalid_argument("tensor basis dimension must be >= 1");
  if (count < 1) throw std::invalid_argument("tensor basis needs at least one element");
  labels_.reserve(count * static_cast<std::size_t>(dim));
  // Walk total degrees dim, dim+1, ...; within a degree enumerate labels in
  // ascending lexicographic order.
  std::vector<int> beta(static_cast<std::size_t>(dim));
  std::size_t produced = 0;
  for (int degree = dim; produced < count; ++degree) {
    // Lexicographically smallest composition: (1, ..., 1, degree - dim + 1).
    std::fill(beta.begin(), beta.end(), 1);
    beta.back() = degree - dim + 1;
    while (true) {
      labels_.insert(labels_.end(), beta.begin(), beta.end());
      for (int b : beta) max_entry_ = std::max(max_entry_, b);
      if (++produced == count) break;
      // Next composition in lex order: find the rightmost position p < dim-1
      // that can be incremented while leaving room to the right.
      int p = dim - 2;
      int tail = beta[dim - 1];
      while (p >= 0 && tail <= static_cast<int>(dim - 1 - p)) {
        tail += beta[p];
        --p;
      }
      if (p < 0) break;
      ++beta[p];
      tail -= 1;
      for (int q = p + 1; q < dim - 1; ++q) {
        beta[q] = 1;
        tail -= 1;
      }
      beta[dim - 1] = tail;
    }
  }
}

std::span<const int> TensorBasisOrdering::label(std::size_t j) const {
  if (j < 1 || j > count_) {
    throw std::out_of_range("tensor basis index " + std::to_string(j) + " outside [1, " +
                            std::to_string(count_) + "]");
  }
  return {labels_.data() + (j - 1) * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

double TensorBasisOrdering::eval(std::size_t j, std::span<const double> x) const {
  const auto beta = label(j);
  if (x.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("point dimension mismatch");
  double value = 1.0;
  for (int l = 0; l < dim_; ++l) value *= hermite_function(beta[l], x[l]);
  return value;
}

double evaluate_polynomial(std::span<const double> coefficients, double z) noexcept {
  double value = 0.0;
  for (std::size_t i = coefficients.size(); i-- > 0;) value = value * z + coefficients[i];
  return value;
}

OrthoPolySystem OrthoPolySystem::build(const LevyMeasure& measure, int max_degree) {
  if (max_degree < 1) throw std::invalid_argument("ortho polynomial degree must be >= 1");
  const auto nodes = measure.nodes();
  const double second = measure.moment(2);
  if (!(second > 0.0)) throw std::invalid_argument("degenerate measure: zero second moment");

  auto rho_dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (const auto& node : nodes) {
      sum += node.weight * node.z * node.z * evaluate_polynomial(a, node.z) * evaluate_polynomial(b, node.z);
    }
    return sum;
  };

  OrthoPolySystem sys;
  sys.requested_ = max_degree;
  sys.m2_ = std::sqrt(second);

  for (int j = 0; j < max_degree; ++j) {
    std::vector<double> v(static_cast<std::size_t>(j) + 1, 0.0);
    v[j] = 1.0;
    const double monomial_norm = std::sqrt(rho_dot(v, v));
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t q = 0; q < sys.eta_coeffs_.size(); ++q) {
        const auto& e = sys.eta_coeffs_[q];
        const double proj = rho_dot(v, e) / (sys.eta_norms_[q] * sys.eta_norms_[q]);
        for (std::size_t c = 0; c < e.size(); ++c) v[c] -= proj * e[c];
      }
    }
    const double norm = j == 0 ? sys.m2_ : std::sqrt(std::max(0.0, rho_dot(v, v)));
    if (!(norm > 1e-10 * monomial_norm)) break;
    sys.eta_coeffs_.push_back(v);
    sys.eta_norms_.push_back(norm);
    std::vector<double> p(v.size() + 1, 0.0);
    for (std::size_t c = 0; c < v.size(); ++c) p[c + 1] = v[c] / norm;
    sys.p_coeffs_.push_back(std::move(p));
  }
  return sys;
}

std::span<const double> OrthoPolySystem::p_coefficients(int j) const {
  if (j < 1 || j > size()) {
    throw std::out_of_range("p_" + std::to_string(j) + " not available (J_nu = " + std::to_string(size()) + ")");
  }
  return p_coeffs_[static_cast<std::size_t>(j) - 1];
}

std::span<const double> OrthoPolySystem::eta_coefficients(int j) const {
  if (j < 0 || j >= size()) throw std::out_of_range("eta index out of range");
  return eta_coeffs_[static_cast<std::size_t>(j)];
}

double OrthoPolySystem::eta_norm(int j) const {
  if (j < 0 || j >= size()) throw std::out_of_range("eta index out of range");
  return eta_norms_[static_cast<std::size_t>(j)];
}

double OrthoPolySystem::p(int j, double z) const { return evaluate_polynomial(p_coefficients(j), z); }

double OrthoPolySystem::eta(int j, double z) const { return evaluate_polynomial(eta_coefficients(j), z); }

double theta_eval(const OrthoPolySystem& system, const TensorBasisOrdering& ordering, std::int64_t k,
                  std::span<const double> x, double z) {
  const auto [i, j] = kappa_inverse(k);
  if (j > system.size()) {
    throw std::out_of_range("theta_" + std::to_string(k) + " needs p_" + std::to_string(j) +
                            " but the measure supports only " + std::to_string(system.size()) +
                            " orthonormal polynomials");
  }
  return ordering.eval(static_cast<std::size_t>(i), x) * system.p(static_cast<int>(j), z);
}

}  // namespace levy
