#include "levy/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

namespace levy {

std::vector<double> SampleMatrix::column(std::size_t c) const {
  std::vector<double> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = data[i * width + c];
  return out;
}

bool SampleStats::mean_within(double target, double n_se) const {
  return std::abs(mean - target) <= n_se * std_error;
}

bool SampleStats::variance_within(double target, double n_se, double extra) const {
  return std::abs(variance - target) <= n_se * variance_std_error + extra;
}

SampleStats summarize(std::span<const double> values) {
  SampleStats s;
  s.count = values.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count < 2) return s;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const auto n = static_cast<double>(s.count);
  s.variance = m2 / (n - 1.0);
  s.std_error = std::sqrt(s.variance / n);
  const double mu2 = m2 / n;
  const double mu4 = m4 / n;
  s.variance_std_error = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n);
  return s;
}

SampleStats summarize_product(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("summarize_product: length mismatch");
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return summarize(prod);
}

}  // namespace levy
