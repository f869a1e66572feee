#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace levy {

// Monte-Carlo harness. Sample i always draws from the RNG streams keyed by
// (seed, i), and every sample writes its own slot, so results do not depend on
// the worker count. Reductions run sequentially in sample order afterwards.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t width = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const { return {data.data() + i * width, width}; }
  double at(std::size_t i, std::size_t c) const { return data[i * width + c]; }
  std::vector<double> column(std::size_t c) const;
};

// Calls fill(i, row) for i in [0, n) across `workers` threads; row has `width` slots.
template <class Fill>
SampleMatrix run_samples(std::size_t n, std::size_t width, unsigned workers, Fill&& fill) {
  SampleMatrix out;
  out.rows = n;
  out.width = width;
  out.data.assign(n * width, 0.0);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      fill(i, std::span<double>(out.data.data() + i * width, width));
    }
  };
  if (workers == 1) {
    work(0, n);
    return out;
  }

  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct SampleStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;   // unbiased
  double std_error = 0.0;  // of the mean

  // Standard error of the sample variance, from the fourth central moment.
  double variance_std_error = 0.0;

  bool mean_within(double target, double n_se = 3.0) const;
  bool variance_within(double target, double n_se = 3.0, double extra = 0.0) const;
};

SampleStats summarize(std::span<const double> values);

// Statistics of the product column a[i] * b[i].
SampleStats summarize_product(std::span<const double> a, std::span<const double> b);

}  // namespace levy
