#include "levy/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace levy {

namespace {

double sum_descending(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

double weighted_norm(const ChaosCoefficients& f, int k) {
  std::vector<double> terms;
  terms.reserve(f.size());
  for (const auto& [alpha, c] : f.terms()) {
    terms.push_back(c * c * static_cast<double>(alpha_factorial(alpha)) * two_n_pow(alpha, k));
  }
  return sum_descending(std::move(terms));
}

}  // namespace

MultiIndexAlpha::MultiIndexAlpha(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first < 1) throw std::invalid_argument("multi-index positions start at 1");
    if (entries_[i].second < 1) throw std::invalid_argument("multi-index values must be >= 1 (zeros are not stored)");
    if (i > 0 && entries_[i].first <= entries_[i - 1].first) {
      throw std::invalid_argument("multi-index positions must be strictly increasing");
    }
  }
}

MultiIndexAlpha MultiIndexAlpha::unit(std::int64_t position) { return MultiIndexAlpha({{position, 1}}); }

MultiIndexAlpha MultiIndexAlpha::from_positions(std::vector<std::int64_t> positions) {
  std::sort(positions.begin(), positions.end());
  std::vector<Entry> entries;
  for (auto p : positions) {
    if (!entries.empty() && entries.back().first == p) {
      ++entries.back().second;
    } else {
      entries.emplace_back(p, 1);
    }
  }
  return MultiIndexAlpha(std::move(entries));
}

MultiIndexAlpha MultiIndexAlpha::parse(const std::string& label) {
  if (label == "0") return {};
  std::vector<Entry> entries;
  std::stringstream in(label);
  std::string part;
  while (std::getline(in, part, '*')) {
    const auto caret = part.find('^');
    try {
      const std::int64_t pos = std::stoll(part.substr(0, caret));
      const int value = caret == std::string::npos ? 1 : std::stoi(part.substr(caret + 1));
      entries.emplace_back(pos, value);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("malformed multi-index label '" + label + "'");
    }
  }
  return MultiIndexAlpha(std::move(entries));
}

int MultiIndexAlpha::order() const noexcept {
  int total = 0;
  for (const auto& e : entries_) total += e.second;
  return total;
}

std::int64_t MultiIndexAlpha::index() const noexcept { return entries_.empty() ? 0 : entries_.back().first; }

int MultiIndexAlpha::value_at(std::int64_t position) const noexcept {
  for (const auto& e : entries_) {
    if (e.first == position) return e.second;
  }
  return 0;
}

std::vector<std::int64_t> MultiIndexAlpha::positions() const {
  std::vector<std::int64_t> out;
  for (const auto& [pos, value] : entries_) out.insert(out.end(), static_cast<std::size_t>(value), pos);
  return out;
}

std::string MultiIndexAlpha::label() const {
  if (entries_.empty()) return "0";
  std::string out;
  for (const auto& [pos, value] : entries_) {
    if (!out.empty()) out += '*';
    out += std::to_string(pos);
    if (value > 1) out += '^' + std::to_string(value);
  }
  return out;
}

bool graded_less(const MultiIndexAlpha& a, const MultiIndexAlpha& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.positions() < b.positions();
}

std::vector<MultiIndexAlpha> enumerate_alphas(std::int64_t max_position, int max_order) {
  if (max_position < 1 || max_order < 0) throw std::invalid_argument("enumerate_alphas: bad range");
  std::vector<MultiIndexAlpha> out{MultiIndexAlpha{}};
  std::vector<std::int64_t> current;
  // Non-decreasing position sequences of each length.
  std::function<void(std::int64_t, int)> extend = [&](std::int64_t start, int remaining) {
    if (remaining == 0) {
      out.push_back(MultiIndexAlpha::from_positions(current));
      return;
    }
    for (std::int64_t p = start; p <= max_position; ++p) {
      current.push_back(p);
      extend(p, remaining - 1);
      current.pop_back();
    }
  };
  for (int m = 1; m <= max_order; ++m) extend(1, m);
  return out;
}

std::uint64_t alpha_factorial(const MultiIndexAlpha& alpha) {
  std::uint64_t result = 1;
  for (const auto& e : alpha.entries()) {
    for (int v = 2; v <= e.second; ++v) {
      if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(v), &result)) {
        throw std::overflow_error("alpha! overflows 64 bits");
      }
    }
  }
  return result;
}

double two_n_pow(const MultiIndexAlpha& alpha, int k) {
  double result = 1.0;
  for (const auto& [pos, value] : alpha.entries()) {
    result *= std::pow(2.0 * static_cast<double>(pos), static_cast<double>(k) * value);
  }
  return result;
}

ChaosCoefficients::ChaosCoefficients(std::string measure_name, int dim, int j_nu)
    : measure_name_(std::move(measure_name)), dim_(dim), j_nu_(j_nu) {}

void ChaosCoefficients::check(const MultiIndexAlpha& alpha) const {
  if (j_nu_ <= 0) return;
  for (const auto& e : alpha.entries()) {
    if (kappa_inverse(e.first).second > j_nu_) {
      throw std::invalid_argument("multi-index " + alpha.label() + " needs a polynomial index above J_nu = " +
                                  std::to_string(j_nu_));
    }
  }
}

void ChaosCoefficients::set(const MultiIndexAlpha& alpha, double value) {
  check(alpha);
  terms_[alpha] = value;
}

void ChaosCoefficients::add(const MultiIndexAlpha& alpha, double value) {
  check(alpha);
  terms_[alpha] += value;
}

double ChaosCoefficients::get(const MultiIndexAlpha& alpha) const {
  const auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double hida_norm_k(const ChaosCoefficients& f, int k) {
  if (k < 0) throw std::invalid_argument("hida_norm_k needs k >= 0");
  return weighted_norm(f, k);
}

double hida_norm_neg_q(const ChaosCoefficients& f, int q) {
  if (q < 0) throw std::invalid_argument("hida_norm_neg_q needs q >= 0");
  return weighted_norm(f, -q);
}

double action(const ChaosCoefficients& f, const ChaosCoefficients& phi) {
  std::vector<double> terms;
  for (const auto& [alpha, a] : f.terms()) {
    const auto it = phi.terms().find(alpha);
    if (it != phi.terms().end()) terms.push_back(a * it->second * static_cast<double>(alpha_factorial(alpha)));
  }
  return sum_descending(std::move(terms));
}

double generalized_expectation(const ChaosCoefficients& f) { return f.get(MultiIndexAlpha{}); }

namespace {

struct SlotEnumerator {
  const LevySheetPath& path;
  const TensorFunction& g;
  const CompensatorRule& rule;
  int m;
  std::size_t dim;
  std::vector<double> xs;
  std::vector<double> zs;
  std::vector<char> used;

  double run(int slot, double weight) {
    if (slot == m) return weight * g(xs, zs);
    double total = 0.0;
    double* x = xs.data() + static_cast<std::size_t>(slot) * dim;
    for (std::size_t k = 0; k < path.jump_count(); ++k) {
      if (used[k]) continue;
      used[k] = 1;
      const auto loc = path.location(k);
      std::copy(loc.begin(), loc.end(), x);
      zs[slot] = path.marks[k];
      total += run(slot + 1, weight);
      used[k] = 0;
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto pt = rule.point(q);
      std::copy(pt.begin(), pt.end(), x);
      zs[slot] = rule.mark(q);
      total += run(slot + 1, -weight * rule.weight(q));
    }
    return total;
  }
};

}  // namespace

double iterated_integral(const LevySheetPath& path, const TensorFunction& g, int m, const CompensatorRule& rule) {
  if (m < 0 || m > 3) throw std::invalid_argument("iterated_integral supports 0 <= m <= 3");
  if (rule.dim() != path.dim()) throw std::invalid_argument("compensator rule dimension mismatch");
  SlotEnumerator e{path, g, rule, m, path.dim(), std::vector<double>(static_cast<std::size_t>(m) * path.dim()),
                   std::vector<double>(static_cast<std::size_t>(m)), std::vector<char>(path.jump_count(), 0)};
  return e.run(0, 1.0);
}

double iterated_integral(const LevySheetPath& path, const TensorFunction& g, int m) {
  return iterated_integral(path, g, m, CompensatorRule::build(path.domain, *path.measure, path.epsilon));
}

void check_alpha_compatible(const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                            const TensorBasisOrdering& ordering) {
  for (const auto& e : alpha.entries()) {
    const auto [i, j] = kappa_inverse(e.first);
    if (j > system.size()) {
      throw std::invalid_argument("multi-index " + alpha.label() + " uses p_" + std::to_string(j) +
                                  " but J_nu = " + std::to_string(system.size()));
    }
    if (static_cast<std::size_t>(i) > ordering.size()) {
      throw std::invalid_argument("multi-index " + alpha.label() + " uses e_" + std::to_string(i) +
                                  " beyond the basis ordering");
    }
  }
}

TensorFunction symmetrized_theta(const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                                 const TensorBasisOrdering& ordering) {
  check_alpha_compatible(alpha, system, ordering);
  const auto positions = alpha.positions();
  const std::size_t dim = static_cast<std::size_t>(ordering.dim());
  return [positions, dim, &system, &ordering](std::span<const double> xs, std::span<const double> zs) {
    const std::size_t m = positions.size();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    std::size_t count = 0;
    do {
      double prod = 1.0;
      for (std::size_t s = 0; s < m; ++s) {
        prod *= theta_eval(system, ordering, positions[perm[s]], xs.subspan(s * dim, dim), zs[s]);
      }
      total += prod;
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / static_cast<double>(count);
  };
}

double k_alpha_sample(const LevySheetPath& path, const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                      const TensorBasisOrdering& ordering, const CompensatorRule& rule) {
  if (alpha.is_zero()) return 1.0;
  if (alpha.order() > 3) throw std::invalid_argument("k_alpha_sample supports |alpha| <= 3");
  return iterated_integral(path, symmetrized_theta(alpha, system, ordering), alpha.order(), rule);
}

double k_alpha_sample(const LevySheetPath& path, const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                      const TensorBasisOrdering& ordering) {
  return k_alpha_sample(path, alpha, system, ordering,
                        CompensatorRule::build(path.domain, *path.measure, path.epsilon));
}

ChaosContext::ChaosContext(std::shared_ptr<const OrthoPolySystem> system,
                           std::shared_ptr<const TensorBasisOrdering> ordering, CompensatorRule rule,
                           std::int64_t max_position)
    : system_(std::move(system)), ordering_(std::move(ordering)), rule_(std::move(rule)), max_position_(max_position) {
  if (!system_ || !ordering_) throw std::invalid_argument("chaos context needs a basis");
  if (max_position_ < 1) throw std::invalid_argument("chaos context needs max_position >= 1");
  check_alpha_compatible(MultiIndexAlpha::unit(max_position_), *system_, *ordering_);
  for (std::int64_t k = 1; k <= max_position_; ++k) {
    check_alpha_compatible(MultiIndexAlpha::unit(k), *system_, *ordering_);
    mass_.push_back(rule_.integrate([&](std::span<const double> x, double z) { return theta(k, x, z); }));
  }
}

double ChaosContext::theta(std::int64_t k, std::span<const double> x, double z) const {
  return theta_eval(*system_, *ordering_, k, x, z);
}

void ChaosContext::evaluate(const LevySheetPath& path, std::span<const MultiIndexAlpha> alphas,
                            std::span<double> out) const {
  const std::size_t jumps = path.jump_count();
  const auto kmax = static_cast<std::size_t>(max_position_);
  const std::size_t dim = path.dim();

  // theta_k at every jump, computed from per-axis Hermite tables and p_j.
  const int hmax = ordering_->max_label_entry();
  std::vector<double> herm(dim * static_cast<std::size_t>(hmax));
  std::vector<double> f(kmax * jumps);
  for (std::size_t n = 0; n < jumps; ++n) {
    const auto x = path.location(n);
    for (std::size_t l = 0; l < dim; ++l) {
      hermite_functions(hmax, x[l], std::span<double>(herm.data() + l * hmax, static_cast<std::size_t>(hmax)));
    }
    for (std::size_t k = 1; k <= kmax; ++k) {
      const auto [i, j] = kappa_inverse(static_cast<std::int64_t>(k));
      const auto beta = ordering_->label(static_cast<std::size_t>(i));
      double e = 1.0;
      for (std::size_t l = 0; l < dim; ++l) e *= herm[l * hmax + static_cast<std::size_t>(beta[l] - 1)];
      f[(k - 1) * jumps + n] = e * system_->p(static_cast<int>(j), path.marks[n]);
    }
  }
  auto row = [&](std::int64_t k) {
    if (k < 1 || k > max_position_) throw std::out_of_range("multi-index position outside the chaos context");
    return f.data() + static_cast<std::size_t>(k - 1) * jumps;
  };
  auto power_sum = [&](std::initializer_list<const double*> rows) {
    double s = 0.0;
    for (std::size_t n = 0; n < jumps; ++n) {
      double prod = 1.0;
      for (const double* r : rows) prod *= r[n];
      s += prod;
    }
    return s;
  };

  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const auto pos = alphas[a].positions();
    const std::size_t m = pos.size();
    if (m > 3) throw std::invalid_argument("fast K_alpha supports |alpha| <= 3");
    if (m == 0) {
      out[a] = 1.0;
      continue;
    }
    std::vector<const double*> r(m);
    std::vector<double> mu(m);
    for (std::size_t s = 0; s < m; ++s) {
      r[s] = row(pos[s]);
      mu[s] = theta_mass(pos[s]);
    }
    // D over the jump-slot subset given by mask (distinct ordered tuples).
    auto distinct = [&](unsigned mask) -> double {
      std::vector<const double*> rows;
      for (std::size_t s = 0; s < m; ++s) {
        if (mask & (1u << s)) rows.push_back(r[s]);
      }
      switch (rows.size()) {
        case 0:
          return 1.0;
        case 1:
          return power_sum({rows[0]});
        case 2:
          return power_sum({rows[0]}) * power_sum({rows[1]}) - power_sum({rows[0], rows[1]});
        default: {
          const double s1 = power_sum({rows[0]}), s2 = power_sum({rows[1]}), s3 = power_sum({rows[2]});
          return s1 * s2 * s3 - power_sum({rows[0], rows[1]}) * s3 - power_sum({rows[0], rows[2]}) * s2 -
                 power_sum({rows[1], rows[2]}) * s1 + 2.0 * power_sum({rows[0], rows[1], rows[2]});
        }
      }
    };
    double total = 0.0;
    const unsigned full = (1u << m) - 1u;
    for (unsigned comp = 0; comp <= full; ++comp) {
      double weight = 1.0;
      for (std::size_t s = 0; s < m; ++s) {
        if (comp & (1u << s)) weight *= -mu[s];
      }
      total += weight * distinct(full & ~comp);
    }
    out[a] = total;
  }
}

double ChaosContext::evaluate(const LevySheetPath& path, const MultiIndexAlpha& alpha) const {
  double value = 0.0;
  evaluate(path, std::span<const MultiIndexAlpha>(&alpha, 1), std::span<double>(&value, 1));
  return value;
}

CoefficientEstimate estimate_coefficient(std::span<const double> f_samples, std::span<const double> k_samples,
                                         const MultiIndexAlpha& alpha) {
  const auto stats = summarize_product(f_samples, k_samples);
  const double fact = static_cast<double>(alpha_factorial(alpha));
  return {stats.mean / fact, stats.std_error / fact};
}

OrthogonalityReport orthogonality_matrix(const ChaosContext& context, const LevySheetSimulator& simulator,
                                         std::span<const MultiIndexAlpha> alphas, std::size_t n_seeds,
                                         std::uint64_t seed, unsigned workers, double n_se) {
  const std::size_t na = alphas.size();
  const SampleMatrix samples = run_samples(n_seeds, na, workers, [&](std::size_t i, std::span<double> row) {
    context.evaluate(simulator.simulate(seed, i), alphas, row);
  });

  OrthogonalityReport rep;
  rep.alphas.assign(alphas.begin(), alphas.end());
  rep.samples = n_seeds;
  rep.mean.assign(na * na, 0.0);
  rep.std_error.assign(na * na, 0.0);
  rep.expected.assign(na * na, 0.0);
  std::vector<std::vector<double>> columns(na);
  for (std::size_t a = 0; a < na; ++a) {
    columns[a] = samples.column(a);
    const auto s = summarize(columns[a]);
    rep.k_mean.push_back(s.mean);
    rep.k_std_error.push_back(s.std_error);
  }
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = a; b < na; ++b) {
      const auto s = summarize_product(columns[a], columns[b]);
      const double expected = a == b ? static_cast<double>(alpha_factorial(alphas[a])) : 0.0;
      for (auto idx : {a * na + b, b * na + a}) {
        rep.mean[idx] = s.mean;
        rep.std_error[idx] = s.std_error;
        rep.expected[idx] = expected;
      }
      ++rep.checks;
      const double dev = std::abs(s.mean - expected);
      if (s.std_error > 0.0) {
        rep.max_abs_z = std::max(rep.max_abs_z, dev / s.std_error);
        if (dev > n_se * s.std_error) ++rep.failures;
      } else if (dev > 1e-12 * std::max(1.0, expected)) {
        ++rep.failures;
      }
    }
  }
  return rep;
}

}  // namespace levy
