#include "levy/simd/kernels.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace levy::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void hermite_functions_scalar(std::size_t count, const double* x, std::size_t n_points, double* out) {
  if (count == 0) return;
  const double c0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (std::size_t p = 0; p < n_points; ++p) {
    const double xp = x[p];
    double prev = 0.0;
    double cur = c0 * std::exp(-0.5 * xp * xp);
    out[p] = cur;
    for (std::size_t k = 0; k + 1 < count; ++k) {
      const double kk = static_cast<double>(k);
      const double next = std::sqrt(2.0 / (kk + 1.0)) * xp * cur - std::sqrt(kk / (kk + 1.0)) * prev;
      prev = cur;
      cur = next;
      out[(k + 1) * n_points + p] = cur;
    }
  }
}

void cosine_transform_scalar(const double* freq, const double* amp, std::size_t n_nodes, double step,
                             std::size_t n_out, double* out) {
  std::vector<double> c(n_nodes), s(n_nodes), c1(n_nodes), s1(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    c1[k] = std::cos(step * freq[k]);
    s1[k] = std::sin(step * freq[k]);
  }
  for (std::size_t i = 0; i < n_out; ++i) {
    if (i % 256 == 0) {
      const double t = step * static_cast<double>(i);
      for (std::size_t k = 0; k < n_nodes; ++k) {
        c[k] = std::cos(t * freq[k]);
        s[k] = std::sin(t * freq[k]);
      }
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < n_nodes; ++k) acc += amp[k] * c[k];
    out[i] = acc;
    for (std::size_t k = 0; k < n_nodes; ++k) {
      const double cn = c[k] * c1[k] - s[k] * s1[k];
      s[k] = s[k] * c1[k] + c[k] * s1[k];
      c[k] = cn;
    }
  }
}

constexpr KernelTable kScalar{Isa::scalar, dot_scalar, hermite_functions_scalar, cosine_transform_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace levy::simd
