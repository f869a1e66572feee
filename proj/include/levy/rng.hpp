#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace levy {

// Philox4x32-10 counter-based generator.
//
// A stream is identified by (seed, stream, sample). The seed is the 64-bit
// key; the counter words hold the sample index (64 bits), the stream tag
// (32 bits) and a block counter (32 bits). Any Monte-Carlo sample can be
// regenerated in isolation from those three numbers.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key) noexcept;
};

enum class Stream : std::uint32_t {
  count = 0,
  location = 1,
  mark = 2,
  gaussian = 3,
  auxiliary = 4,
};

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t sample = 0) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  double normal() noexcept;

  // Poisson by sequential inversion in chunks of mean <= 16, exact in law.
  std::uint64_t poisson(double mean);

  // Index drawn with probability proportional to cumulative[i] - cumulative[i-1].
  std::size_t categorical(std::span<const double> cumulative) noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_{};
  Philox4x32::Block counter_{};
  Philox4x32::Block buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace levy
