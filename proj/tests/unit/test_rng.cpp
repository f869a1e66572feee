#include "levy/rng.hpp"

#include <doctest.h>
#include <stdexcept>

#include <cmath>
#include <vector>

using namespace levy;

TEST_CASE("philox known-answer vectors") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::generate(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  CounterRng a(7, Stream::mark, 3), b(7, Stream::mark, 3), c(7, Stream::mark, 4), d(7, Stream::location, 3);
  const auto va = a.next_u64();
  CHECK(va == b.next_u64());
  CHECK(va != c.next_u64());
  CHECK(va != d.next_u64());
}

TEST_CASE("uniform and normal moments") {
  CounterRng rng(11, Stream::auxiliary);
  const int n = 200000;
  double s = 0, s2 = 0, m = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
    const double g = rng.normal();
    m += g;
    m2 += g * g;
    m4 += g * g * g * g;
  }
  CHECK(std::abs(s / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(s2 / n - 1.0 / 3.0) < 0.003);
  CHECK(std::abs(m / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(m2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("poisson mean and variance across the chunking threshold") {
  for (double mean : {0.3, 5.0, 40.0}) {
    CounterRng rng(3, Stream::count);
    const int n = 50000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double mu = s / n, var = s2 / n - mu * mu;
    CHECK(std::abs(mu - mean) < 4.0 * std::sqrt(mean / n));
    CHECK(std::abs(var / mean - 1.0) < 0.05);
  }
  CounterRng rng(1, Stream::count);
  CHECK(rng.poisson(0.0) == 0);
  CHECK_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
}

TEST_CASE("categorical frequencies") {
  const std::vector<double> cumulative{1.0, 3.0, 6.0};
  CounterRng rng(5, Stream::mark);
  std::vector<int> counts(3, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[rng.categorical(cumulative)];
  CHECK(std::abs(counts[0] / double(n) - 1.0 / 6.0) < 0.01);
  CHECK(std::abs(counts[1] / double(n) - 2.0 / 6.0) < 0.01);
  CHECK(std::abs(counts[2] / double(n) - 3.0 / 6.0) < 0.01);
}
