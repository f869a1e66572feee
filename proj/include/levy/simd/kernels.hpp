#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference variant and,
// on x86-64, an AVX2/FMA variant; the active table is picked once at startup
// from CPUID and can be forced with LEVY_SIMD=scalar|avx2.

#include <cstddef>
#include <span>
#include <string_view>

namespace levy::simd {

enum class Isa { scalar, avx2 };

// Points with |x| above this are outside the batch Hermite kernel's range
// (exp(-x^2/2) underflows); callers route them to the scaled scalar path.
inline constexpr double kHermiteBatchMaxAbsX = 35.0;

struct KernelTable {
  Isa isa;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // out[k * n_points + p] = xi_{k+1}(x[p]) for k < count (normalized Hermite
  // functions, three-term recurrence). Requires |x[p]| <= kHermiteBatchMaxAbsX.
  void (*hermite_functions)(std::size_t count, const double* x, std::size_t n_points, double* out);

  // out[i] = sum_k amp[k] * cos(i * step * freq[k]) for i < n_out, by phasor
  // rotation with exact re-anchoring every 256 steps.
  void (*cosine_transform)(const double* freq, const double* amp, std::size_t n_nodes, double step,
                           std::size_t n_out, double* out);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(LEVY_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

bool isa_available(Isa isa) noexcept;

// Active table; resolved on first use.
const KernelTable& kernels() noexcept;
const KernelTable& kernels(Isa isa);

Isa active_isa() noexcept;
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;

// Convenience wrappers over the active table.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

}  // namespace levy::simd
