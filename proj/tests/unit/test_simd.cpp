#include "levy/simd/kernels.hpp"

#include <doctest.h>
#include <stdexcept>

#include <cmath>
#include <vector>

using namespace levy;

namespace {

std::vector<double> ramp(std::size_t n, double a, double b) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * std::sin(0.37 * static_cast<double>(i) + 0.1);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(simd::isa_available(simd::Isa::scalar));
  CHECK(simd::kernels(simd::Isa::scalar).isa == simd::Isa::scalar);
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!simd::isa_available(simd::Isa::avx2)) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  const auto& s = simd::kernels(simd::Isa::scalar);
  const auto& v = simd::kernels(simd::Isa::avx2);

  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 33u, 1000u}) {
    const auto a = ramp(n, -2.0, 3.0), b = ramp(n, 1.0, -1.0);
    double mag = 0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
    CHECK(std::abs(s.dot(a.data(), b.data(), n) - v.dot(a.data(), b.data(), n)) <= 1e-14 * std::max(1.0, mag));
  }

  const std::vector<double> xs{-34.0, -10.5, -1.0, 0.0, 0.3, 2.0, 7.7, 20.0, 34.9};
  const std::size_t count = 300;
  std::vector<double> hs(count * xs.size()), hv(count * xs.size());
  s.hermite_functions(count, xs.data(), xs.size(), hs.data());
  v.hermite_functions(count, xs.data(), xs.size(), hv.data());
  double worst = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) worst = std::max(worst, std::abs(hs[i] - hv[i]));
  CHECK(worst < 1e-12);

  const auto freq = ramp(257, 0.0, 40.0), amp = ramp(257, -1.0, 1.0);
  std::vector<double> cs(3001), cv(3001);
  s.cosine_transform(freq.data(), amp.data(), freq.size(), 0.01, cs.size(), cs.data());
  v.cosine_transform(freq.data(), amp.data(), freq.size(), 0.01, cv.size(), cv.data());
  worst = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) worst = std::max(worst, rel(cv[i], cs[i]));
  CHECK(worst < 1e-11);
}

TEST_CASE("cosine transform matches direct cosines") {
  const auto freq = ramp(50, 0.0, 12.0), amp = ramp(50, -1.0, 1.0);
  std::vector<double> out(2000);
  simd::kernels().cosine_transform(freq.data(), amp.data(), freq.size(), 0.05, out.size(), out.data());
  for (std::size_t i : {0u, 1u, 255u, 256u, 257u, 1999u}) {
    double direct = 0;
    for (std::size_t k = 0; k < freq.size(); ++k) direct += amp[k] * std::cos(static_cast<double>(i) * 0.05 * freq[k]);
    CHECK(out[i] == doctest::Approx(direct).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("forcing the active table") {
  const auto before = simd::active_isa();
  simd::set_active_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  simd::set_active_isa(before);
  CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
}
