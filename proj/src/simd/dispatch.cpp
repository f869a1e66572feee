#include "levy/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace levy::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(LEVY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* resolve_default() noexcept {
  const char* forced = std::getenv("LEVY_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") return &scalar_kernels();
#if defined(LEVY_HAVE_AVX2)
  if (cpu_has_avx2()) return &avx2_kernels();
#endif
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{resolve_default()};
  return slot;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

const KernelTable& kernels(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("kernel variant " + std::string(isa_name(isa)) + " is not available on this CPU");
  }
#if defined(LEVY_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2_kernels();
#endif
  return scalar_kernels();
}

Isa active_isa() noexcept { return kernels().isa; }

void set_active_isa(Isa isa) { active_slot().store(&kernels(isa), std::memory_order_release); }

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace levy::simd
