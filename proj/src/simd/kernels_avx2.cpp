#include "levy/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace levy::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double sum = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void hermite_functions_avx2(std::size_t count, const double* x, std::size_t n_points, double* out) {
  if (count == 0) return;
  const double c0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (std::size_t p = 0; p < n_points; ++p) out[p] = c0 * std::exp(-0.5 * x[p] * x[p]);
  if (count == 1) return;

  std::size_t p = 0;
  for (; p + 4 <= n_points; p += 4) {
    const __m256d xv = _mm256_loadu_pd(x + p);
    __m256d prev = _mm256_setzero_pd();
    __m256d cur = _mm256_loadu_pd(out + p);
    for (std::size_t k = 0; k + 1 < count; ++k) {
      const double kk = static_cast<double>(k);
      const __m256d a = _mm256_set1_pd(std::sqrt(2.0 / (kk + 1.0)));
      const __m256d b = _mm256_set1_pd(std::sqrt(kk / (kk + 1.0)));
      const __m256d next = _mm256_fmsub_pd(_mm256_mul_pd(a, xv), cur, _mm256_mul_pd(b, prev));
      prev = cur;
      cur = next;
      _mm256_storeu_pd(out + (k + 1) * n_points + p, cur);
    }
  }
  for (; p < n_points; ++p) {
    const double xp = x[p];
    double prev = 0.0;
    double cur = out[p];
    for (std::size_t k = 0; k + 1 < count; ++k) {
      const double kk = static_cast<double>(k);
      const double next = std::sqrt(2.0 / (kk + 1.0)) * xp * cur - std::sqrt(kk / (kk + 1.0)) * prev;
      prev = cur;
      cur = next;
      out[(k + 1) * n_points + p] = cur;
    }
  }
}

void cosine_transform_avx2(const double* freq, const double* amp, std::size_t n_nodes, double step,
                           std::size_t n_out, double* out) {
  std::vector<double> c(n_nodes), s(n_nodes), c1(n_nodes), s1(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    c1[k] = std::cos(step * freq[k]);
    s1[k] = std::sin(step * freq[k]);
  }
  const std::size_t vec_end = n_nodes - n_nodes % 4;
  for (std::size_t i = 0; i < n_out; ++i) {
    if (i % 256 == 0) {
      const double t = step * static_cast<double>(i);
      for (std::size_t k = 0; k < n_nodes; ++k) {
        c[k] = std::cos(t * freq[k]);
        s[k] = std::sin(t * freq[k]);
      }
    }
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < vec_end; k += 4) {
      const __m256d cv = _mm256_loadu_pd(c.data() + k);
      const __m256d sv = _mm256_loadu_pd(s.data() + k);
      const __m256d c1v = _mm256_loadu_pd(c1.data() + k);
      const __m256d s1v = _mm256_loadu_pd(s1.data() + k);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(amp + k), cv, acc);
      _mm256_storeu_pd(c.data() + k, _mm256_fmsub_pd(cv, c1v, _mm256_mul_pd(sv, s1v)));
      _mm256_storeu_pd(s.data() + k, _mm256_fmadd_pd(sv, c1v, _mm256_mul_pd(cv, s1v)));
    }
    double total = hsum(acc);
    for (std::size_t k = vec_end; k < n_nodes; ++k) {
      total += amp[k] * c[k];
      const double cn = c[k] * c1[k] - s[k] * s1[k];
      s[k] = s[k] * c1[k] + c[k] * s1[k];
      c[k] = cn;
    }
    out[i] = total;
  }
}

constexpr KernelTable kAvx2{Isa::avx2, dot_avx2, hermite_functions_avx2, cosine_transform_avx2};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace levy::simd
