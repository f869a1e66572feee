#include "levy/fracheat.hpp"

#include "levy/montecarlo.hpp"
#include "levy/quadrature.hpp"
#include "levy/simd/kernels.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kAsymTerms = 5;
constexpr std::size_t kThetaNodes = 64;

// Cubic Lagrange interpolation on a uniform table f(i * step), x >= 0.
// parity = +1 / -1 reflects the table as an even / odd function at 0.
double interp_cubic(const std::vector<double>& f, double step, double x, double parity) {
  const auto n = static_cast<long>(f.size());
  const double pos = x / step;
  const auto i = static_cast<long>(std::floor(pos));
  if (i >= n - 1) return f.back();
  const double t = pos - static_cast<double>(i);
  auto at = [&](long j) {
    if (j < 0) return parity * f[static_cast<std::size_t>(-j)];
    if (j >= n) return f[static_cast<std::size_t>(n - 1)];
    return f[static_cast<std::size_t>(j)];
  };
  const double fm = at(i - 1), f0 = at(i), f1 = at(i + 1), f2 = at(i + 2);
  return -t * (t - 1.0) * (t - 2.0) / 6.0 * fm + (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0 * f0 -
         (t + 1.0) * t * (t - 2.0) / 2.0 * f1 + (t + 1.0) * t * (t - 1.0) / 6.0 * f2;
}

// Cumulative integral of a uniform table using the cubic through four
// neighbouring samples on each interval.
std::vector<double> cumulative(const std::vector<double>& f, double step, double parity) {
  const auto n = static_cast<long>(f.size());
  auto at = [&](long j) {
    if (j < 0) return parity * f[static_cast<std::size_t>(-j)];
    if (j >= n) return f[static_cast<std::size_t>(n - 1)];
    return f[static_cast<std::size_t>(j)];
  };
  std::vector<double> out(f.size(), 0.0);
  for (long i = 0; i + 1 < n; ++i) {
    out[static_cast<std::size_t>(i + 1)] =
        out[static_cast<std::size_t>(i)] + step * (-at(i - 1) + 13.0 * at(i) + 13.0 * at(i + 1) - at(i + 2)) / 24.0;
  }
  return out;
}

}  // namespace

KernelProfile::KernelProfile(double alpha, double beta, int d, double rho_max, std::size_t table_points)
    : alpha_(alpha), beta_(beta), d_(d), rho_max_(rho_max), step_(0.0) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("kernel profile needs alpha in (0, 2)");
  if (!(beta > 0.0)) throw std::invalid_argument("kernel profile needs beta > 0");
  if (d != 1 && d != 2) throw std::invalid_argument("kernel profile supports d = 1, 2");
  if (!(rho_max > 0.0)) throw std::invalid_argument("kernel profile needs rho_max > 0");

  // Beyond v_cut the expansion -sum z^-m / Gamma(beta - alpha m) is used; for
  // alpha > 1 the oscillating pole terms decay like exp(v^(2/alpha) cos(pi/alpha))
  // and must be negligible there.
  v_cut_ = 40.0;
  if (alpha > 1.0) {
    const double c = std::abs(std::cos(kPi / alpha));
    v_cut_ = std::clamp(std::pow(45.0 / c, alpha / 2.0), 40.0, 400.0);
  }
  const auto panels = static_cast<std::size_t>(std::ceil(v_cut_ / 0.25));
  const auto rule = composite_gauss_legendre_panels(0.0, v_cut_, panels, 20);
  nodes_ = rule.nodes;
  weights_ = rule.weights;
  e_values_.resize(nodes_.size());
  MittagLefflerParams params;
  params.alpha = alpha;
  params.beta = beta;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const MlResult r = mittag_leffler_eval(params, -nodes_[k] * nodes_[k]);
    if (!r.converged && !(r.error_estimate < 1e-9)) {
      throw std::runtime_error("Mittag-Leffler evaluation failed while building the kernel profile");
    }
    e_values_[k] = r.value;
  }
  for (int m = 1; m <= kAsymTerms; ++m) {
    asym_.push_back(((m & 1) ? 1.0 : -1.0) * reciprocal_gamma(beta - alpha * m));
  }

  // Plancherel: int Phi^2 = (2 pi)^-d int E(-|y|^2)^2 dy.
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    sum += weights_[k] * e_values_[k] * e_values_[k] * (d == 2 ? nodes_[k] : 1.0);
  }
  for (int m = 1; m <= kAsymTerms; ++m) {
    for (int q = 1; q <= kAsymTerms; ++q) {
      const double power = 2.0 * (m + q) - (d == 2 ? 1.0 : 0.0);  // integrand v^-power
      sum += asym_[m - 1] * asym_[q - 1] * std::pow(v_cut_, 1.0 - power) / (power - 1.0);
    }
  }
  l2_norm_sq_ = d == 1 ? sum / kPi : sum / (2.0 * kPi);

  if (table_points == 0) return;
  if (table_points < 8) throw std::invalid_argument("kernel profile table needs at least 8 points");
  step_ = rho_max / static_cast<double>(table_points - 1);
  std::vector<double> amp(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    amp[k] = weights_[k] * e_values_[k] * (d == 2 ? nodes_[k] : 1.0);
  }
  std::vector<double> raw(table_points);
  simd::kernels().cosine_transform(nodes_.data(), amp.data(), nodes_.size(), step_, table_points, raw.data());

  table_.resize(table_points);
  if (d == 1) {
    for (std::size_t i = 0; i < table_points; ++i) {
      table_[i] = (raw[i] + fourier_tail_cos(static_cast<double>(i) * step_, 2, 2)) / kPi;
    }
    primitive_ = cumulative(table_, step_, 1.0);
  } else {
    if (asym_[0] != 0.0) {
      throw std::invalid_argument("d = 2 profile tables need beta = alpha (logarithmic singularity otherwise)");
    }
    std::vector<double> psi(table_points);
    for (std::size_t i = 0; i < table_points; ++i) psi[i] = raw[i] + fourier_tail_cos(static_cast<double>(i) * step_, 1, 2);
    const auto theta = gauss_legendre(kThetaNodes, 0.0, 1.0);
    for (std::size_t i = 0; i < table_points; ++i) {
      const double rho = static_cast<double>(i) * step_;
      double acc = 0.0;
      for (std::size_t g = 0; g < theta.size(); ++g) {
        const double u = theta.nodes[g];
        const double c = rho * std::sin(0.5 * kPi * u * u);
        acc += theta.weights[g] * kPi * u * interp_cubic(psi, step_, c, 1.0);
      }
      table_[i] = acc / (kPi * kPi);
    }
  }
  std::vector<double> sq(table_points);
  for (std::size_t i = 0; i < table_points; ++i) {
    sq[i] = table_[i] * table_[i] * (d == 2 ? 2.0 * kPi * static_cast<double>(i) * step_ : 2.0);
  }
  const auto cum = cumulative(sq, step_, d == 2 ? -1.0 : 1.0);
  tail_sq_.resize(table_points);
  for (std::size_t i = 0; i < table_points; ++i) tail_sq_[i] = std::max(0.0, cum.back() - cum[i]);
}

double KernelProfile::fourier_tail_cos(double c, int first_power, int power_step) const {
  // sum_m a_m int_V^inf cos(c v) v^-(first_power + (m-1) power_step) dv
  const int max_power = first_power + (kAsymTerms - 1) * power_step;
  const double V = v_cut_;
  std::array<double, 16> C{}, S{};
  if (c == 0.0) {
    C[1] = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= max_power; ++n) C[n] = std::pow(V, 1.0 - n) / (n - 1.0);
  } else if (c * V >= 30.0) {
    // Upward recurrence amplifies rounding by c^n / n! here. Use the
    // integration-by-parts series for J_n = int_V^inf v^-n e^{icv} dv:
    //   J_n = (i e^{icV} / c) V^-n sum_k (n)_k (-i / (cV))^k,
    // stopped before the terms grow (error ~ e^{-cV}).
    const double cv = c * V;
    const std::complex<double> lead = std::complex<double>(0.0, 1.0) * std::polar(1.0, cv) / c;
    for (int n = 1; n <= max_power; ++n) {
      std::complex<double> term = 1.0, sum = 1.0;
      for (int k = 0; k < 200; ++k) {
        const std::complex<double> next = term * std::complex<double>(0.0, -(n + k) / cv);
        if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-18) break;
        term = next;
        sum += term;
      }
      C[n] = (lead * std::pow(V, -n) * sum).real();
    }
  } else {
    const double cv = c * V;
    C[1] = -gsl_sf_Ci(cv);
    S[1] = 0.5 * kPi - gsl_sf_Si(cv);
    const double cs = std::cos(cv), sn = std::sin(cv);
    for (int n = 2; n <= max_power; ++n) {
      const double vp = std::pow(V, 1.0 - n) / (n - 1.0);
      C[n] = cs * vp - c / (n - 1.0) * S[n - 1];
      S[n] = sn * vp + c / (n - 1.0) * C[n - 1];
    }
  }
  double sum = 0.0;
  for (int m = 1; m <= kAsymTerms; ++m) {
    if (asym_[m - 1] == 0.0) continue;
    sum += asym_[m - 1] * C[first_power + (m - 1) * power_step];
  }
  return sum;
}

double KernelProfile::psi_radial(double c) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * nodes_[k] * e_values_[k] * std::cos(c * nodes_[k]);
  return sum + fourier_tail_cos(c, 1, 2);
}

double KernelProfile::direct(double rho) const {
  rho = std::abs(rho);
  if (d_ == 1) {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * e_values_[k] * std::cos(rho * nodes_[k]);
    return (sum + fourier_tail_cos(rho, 2, 2)) / kPi;
  }
  if (rho == 0.0) return psi_radial(0.0) / (2.0 * kPi);
  // theta = (pi/2)(1 - u^2) softens the logarithmic endpoint behaviour.
  static const QuadratureRule theta = gauss_legendre(kThetaNodes, 0.0, 1.0);
  double acc = 0.0;
  for (std::size_t g = 0; g < theta.size(); ++g) {
    const double u = theta.nodes[g];
    acc += theta.weights[g] * kPi * u * psi_radial(rho * std::sin(0.5 * kPi * u * u));
  }
  return acc / (kPi * kPi);
}

double KernelProfile::value(double rho) const {
  if (table_.empty()) return direct(rho);
  rho = std::abs(rho);
  if (rho >= rho_max_) return 0.0;
  return interp_cubic(table_, step_, rho, 1.0);
}

double KernelProfile::primitive(double rho) const {
  if (d_ != 1) throw std::logic_error("profile primitive is defined for d = 1");
  if (primitive_.empty()) throw std::logic_error("profile primitive needs the table");
  const double sign = rho < 0.0 ? -1.0 : 1.0;
  rho = std::abs(rho);
  if (rho >= rho_max_) return sign * primitive_.back();
  return sign * interp_cubic(primitive_, step_, rho, -1.0);
}

double KernelProfile::l2_tail(double u) const {
  if (tail_sq_.empty()) throw std::logic_error("profile tail needs the table");
  u = std::abs(u);
  if (u >= rho_max_) return 0.0;
  const double pos = u / step_;
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * tail_sq_[i] + t * tail_sq_[std::min(i + 1, tail_sq_.size() - 1)];
}

void HeatConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("heat: alpha must lie in (0, 2)");
  if (!(lambda > 0.0)) throw std::invalid_argument("heat: lambda must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("heat: t must be > 0 (t = 0 is the Dirac initial datum)");
  if (d >= 3) throw std::invalid_argument("heat: d >= 3 is not supported");
  if (d < 1) throw std::invalid_argument("heat: d must be 1 or 2");
  if (points.empty()) throw std::invalid_argument("heat: at least one evaluation point is needed");
  for (const auto& p : points) {
    if (p.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("heat: evaluation point dimension != d");
    for (double v : p) {
      if (!std::isfinite(v)) throw std::invalid_argument("heat: evaluation points must be finite");
    }
  }
  if (!(x_max >= 0.0) || !(space_step >= 0.0)) throw std::invalid_argument("heat: truncations must be >= 0");
  if (time_cells < 1 || time_nodes < 1 || time_nodes > 64) throw std::invalid_argument("heat: bad time grid");
  if (!(time_grading >= 1.0)) throw std::invalid_argument("heat: time grading must be >= 1");
  if (gamma != 0.0 && !measure) throw std::invalid_argument("heat: gamma != 0 needs a Levy measure");
  if (n_samples < 1) throw std::invalid_argument("heat: n_samples must be >= 1");
}

double HeatConfig::diffusion_width() const { return std::sqrt(lambda * std::pow(t, alpha)); }

double HeatConfig::resolved_x_max() const { return x_max > 0.0 ? x_max : 8.0 * diffusion_width(); }

double HeatConfig::resolved_space_step() const {
  if (space_step > 0.0) return space_step;
  return diffusion_width() / (d == 1 ? 50.0 : 5.0);
}

double deterministic_term(const HeatConfig& config, std::span<const double> x) {
  if (!(config.t > 0.0)) throw std::invalid_argument("deterministic term needs t > 0");
  if (x.size() != static_cast<std::size_t>(config.d)) throw std::invalid_argument("point dimension != d");
  if (config.d >= 3) throw std::invalid_argument("d >= 3 is not supported");
  const KernelProfile profile(config.alpha, 1.0, config.d, 60.0, 0);
  const double w = config.diffusion_width();
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::pow(w, -config.d) * profile.direct(std::sqrt(r2) / w);
}

double greens_kernel(const HeatConfig& config, double s, std::span<const double> r) {
  if (!(s > 0.0)) throw std::invalid_argument("greens kernel needs elapsed time s > 0");
  if (r.size() != static_cast<std::size_t>(config.d)) throw std::invalid_argument("offset dimension != d");
  const KernelProfile profile(config.alpha, config.alpha, config.d, 60.0, 0);
  const double w = std::sqrt(config.lambda * std::pow(s, config.alpha));
  double r2 = 0.0;
  for (double v : r) r2 += v * v;
  return std::pow(s, config.alpha - 1.0) * std::pow(w, -config.d) * profile.direct(std::sqrt(r2) / w);
}

HeatSolver::HeatSolver(HeatConfig config)
    : config_((config.validate(), std::move(config))),
      profile_(config_.alpha, config_.alpha, config_.d),
      x_max_(config_.resolved_x_max()),
      dz_(config_.resolved_space_step()) {
  const int d = config_.d;
  if (config_.alpha > 1.0) {
    warnings_.push_back("alpha > 1: kernel positivity no longer holds; the isometry value is the only variance check");
  }
  const bool stochastic = config_.sigma != 0.0 || config_.gamma != 0.0;
  if (stochastic && ((d == 1 && config_.alpha <= 2.0 / 3.0) || (d == 2 && config_.alpha <= 1.0))) {
    warnings_.push_back("the stochastic terms have infinite variance for this (alpha, d); discretized values depend on the grid");
  }

  {
    const KernelProfile i1_profile(config_.alpha, 1.0, d, 60.0, 0);
    const double w = config_.diffusion_width();
    for (const auto& x : config_.points) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      i1_.push_back(std::pow(w, -d) * i1_profile.direct(std::sqrt(r2) / w));
    }
  }

  std::vector<double> lower{0.0}, upper{config_.t};
  for (int l = 0; l < d; ++l) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& x : config_.points) {
      lo = std::min(lo, x[l]);
      hi = std::max(hi, x[l]);
    }
    lo -= x_max_;
    hi += x_max_;
    const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / dz_ - 1e-9));
    std::vector<double> edges(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j) edges[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(cells);
    edges.back() = hi;
    space_edges_.push_back(std::move(edges));
    lower.push_back(lo);
    upper.push_back(hi);
  }
  domain_ = Domain::from_bounds(lower, upper);
  build_time_rule();
  build_weights();
  if (config_.gamma != 0.0) {
    simulator_ = std::make_shared<const LevySheetSimulator>(config_.measure, domain_, 0.0);
  }
}

void HeatSolver::build_time_rule() {
  const int N = config_.time_cells;
  s_edges_.resize(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) s_edges_[k] = config_.t * std::pow(static_cast<double>(k) / N, config_.time_grading);
  s_edges_.back() = config_.t;
  const auto n = static_cast<std::size_t>(config_.time_nodes);
  for (int k = 0; k < N; ++k) {
    if (k == 0) {
      const auto rule = singular_power_rule(n, s_edges_[1], config_.alpha);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        t_nodes_.push_back(rule.nodes[q]);
        t_weights_.push_back(rule.weights[q]);
        t_cell_.push_back(0);
      }
    } else {
      const auto rule = gauss_legendre(n, s_edges_[k], s_edges_[k + 1]);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        t_nodes_.push_back(rule.nodes[q]);
        t_weights_.push_back(rule.weights[q] * std::pow(rule.nodes[q], config_.alpha - 1.0));
        t_cell_.push_back(static_cast<std::size_t>(k));
      }
    }
  }
}

void HeatSolver::build_weights() {
  const int d = config_.d;
  const std::size_t nt = s_edges_.size() - 1;
  std::size_t ns = 1;
  for (const auto& e : space_edges_) ns *= e.size() - 1;
  const std::size_t cells = nt * ns;

  cell_sqrt_volume_.resize(cells);
  std::vector<double> volume(cells);
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t j = 0; j < ns; ++j) {
      double v = s_edges_[k + 1] - s_edges_[k];
      std::size_t rest = j;
      for (int l = d; l-- > 0;) {
        const std::size_t nl = space_edges_[l].size() - 1;
        const std::size_t idx = rest % nl;
        rest /= nl;
        v *= space_edges_[l][idx + 1] - space_edges_[l][idx];
      }
      volume[k * ns + j] = v;
      cell_sqrt_volume_[k * ns + j] = std::sqrt(v);
    }
  }

  const auto gl3 = gauss_legendre(3, 0.0, 1.0);
  for (const auto& x : config_.points) {
    std::vector<double> W(cells, 0.0);
    for (std::size_t q = 0; q < t_nodes_.size(); ++q) {
      const double s = t_nodes_[q];
      const double w = std::sqrt(config_.lambda * std::pow(s, config_.alpha));
      double* row = W.data() + t_cell_[q] * ns;
      if (d == 1) {
        const auto& edges = space_edges_[0];
        double prev = profile_.primitive((x[0] - edges[0]) / w);
        for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
          const double next = profile_.primitive((x[0] - edges[j + 1]) / w);
          row[j] += t_weights_[q] * (prev - next);
          prev = next;
        }
      } else {
        // 3 x 3 Gauss points per square cell; cells beyond the table range are skipped.
        const auto& e0 = space_edges_[0];
        const auto& e1 = space_edges_[1];
        const std::size_t n1 = e1.size() - 1;
        const double reach = profile_.rho_max() * w;
        const double scale = t_weights_[q] / (w * w);
        for (std::size_t a = 0; a + 1 < e0.size(); ++a) {
          const double da = std::max({0.0, e0[a] - x[0], x[0] - e0[a + 1]});
          if (da > reach) continue;
          for (std::size_t b = 0; b + 1 < e1.size(); ++b) {
            const double db = std::max({0.0, e1[b] - x[1], x[1] - e1[b + 1]});
            if (std::hypot(da, db) > reach) continue;
            const double ha = e0[a + 1] - e0[a], hb = e1[b + 1] - e1[b];
            double acc = 0.0;
            for (std::size_t ga = 0; ga < 3; ++ga) {
              const double za = e0[a] + ha * gl3.nodes[ga];
              for (std::size_t gb = 0; gb < 3; ++gb) {
                const double zb = e1[b] + hb * gl3.nodes[gb];
                acc += gl3.weights[ga] * gl3.weights[gb] * profile_.value(std::hypot(x[0] - za, x[1] - zb) / w);
              }
            }
            row[a * n1 + b] += scale * acc * ha * hb;
          }
        }
      }
    }
    double mass = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      mass += W[c];
      W[c] /= volume[c];
    }
    mass_.push_back(mass);
    coeff_.push_back(std::move(W));
  }
}

double HeatSolver::kernel(double s, std::span<const double> r) const {
  if (!(s > 0.0)) return 0.0;
  const double w = std::sqrt(config_.lambda * std::pow(s, config_.alpha));
  double r2 = 0.0;
  for (double v : r) r2 += v * v;
  return std::pow(s, config_.alpha - 1.0) * std::pow(w, -config_.d) * profile_.value(std::sqrt(r2) / w);
}

void HeatSolver::stochastic_term_brownian(std::uint64_t seed, std::uint64_t sample, std::span<double> out) const {
  if (out.size() < point_count()) throw std::invalid_argument("output span too small");
  if (config_.sigma == 0.0) {
    std::fill(out.begin(), out.begin() + static_cast<long>(point_count()), 0.0);
    return;
  }
  std::vector<double> increments(cell_sqrt_volume_.size());
  brownian_increments(cell_sqrt_volume_, seed, sample, increments);
  for (std::size_t p = 0; p < point_count(); ++p) out[p] = config_.sigma * simd::dot(coeff_[p], increments);
}

LevySheetPath HeatSolver::simulate_levy_path(std::uint64_t seed, std::uint64_t sample) const {
  if (!simulator_) throw std::logic_error("no Levy noise configured (gamma = 0)");
  return simulator_->simulate(seed, sample);
}

void HeatSolver::stochastic_term_levy(const LevySheetPath& path, std::span<double> out) const {
  if (out.size() < point_count()) throw std::invalid_argument("output span too small");
  if (path.dim() != static_cast<std::size_t>(config_.d) + 1) throw std::invalid_argument("path dimension != d + 1");
  const auto d = static_cast<std::size_t>(config_.d);
  std::vector<double> r(d);
  for (std::size_t p = 0; p < point_count(); ++p) {
    if (config_.gamma == 0.0) {
      out[p] = 0.0;
      continue;
    }
    const auto& x = config_.points[p];
    double jumps = 0.0;
    for (std::size_t k = 0; k < path.jump_count(); ++k) {
      const auto loc = path.location(k);
      for (std::size_t l = 0; l < d; ++l) r[l] = x[l] - loc[l + 1];
      jumps += kernel(config_.t - loc[0], r) * path.marks[k];
    }
    out[p] = config_.gamma * (jumps - path.drift_rate * mass_[p]);
  }
}

double HeatSolver::discrete_variance(std::size_t p) const {
  const auto& c = coeff_.at(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += c[i] * c[i] * cell_sqrt_volume_[i] * cell_sqrt_volume_[i];
  return config_.sigma * config_.sigma * sum;
}

double HeatSolver::isometry_variance(std::size_t p) const {
  (void)coeff_.at(p);
  const double a = config_.alpha;
  // int_R^d G(s, r)^2 dr = s^{2 alpha - 2} w^-d ||Phi||^2, w^2 = lambda s^alpha.
  const double e = config_.d == 1 ? 1.5 * a - 1.0 : a - 1.0;
  if (e <= 0.0) return std::numeric_limits<double>::infinity();
  return config_.sigma * config_.sigma * profile_.l2_norm_sq() * std::pow(config_.lambda, -0.5 * config_.d) *
         std::pow(config_.t, e) / e;
}

SolutionStats HeatSolver::solve() const {
  const std::size_t np = point_count();
  const std::size_t n = config_.n_samples;
  const SampleMatrix samples = run_samples(n, 2 * np, config_.workers, [&](std::size_t i, std::span<double> row) {
    stochastic_term_brownian(config_.seed, i, row.subspan(0, np));
    if (config_.gamma != 0.0) {
      stochastic_term_levy(simulate_levy_path(config_.seed, i), row.subspan(np, np));
    }
  });

  SolutionStats out;
  out.samples = n;
  out.warnings = warnings_;

  // Discrete variance after halving both steps (d = 1; the d = 2 weights are too costly to rebuild).
  std::vector<double> refined(np, std::numeric_limits<double>::quiet_NaN());
  if (config_.d == 1 && config_.sigma != 0.0) {
    HeatConfig fine = config_;
    fine.time_cells *= 2;
    fine.space_step = dz_ / 2.0;
    fine.x_max = x_max_;
    fine.gamma = 0.0;
    const HeatSolver finer(fine);
    for (std::size_t p = 0; p < np; ++p) refined[p] = finer.discrete_variance(p);
  }

  const double second_moment = config_.gamma != 0.0 ? config_.measure->moment(2) : 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    PointStats ps;
    ps.x = config_.points[p];
    ps.i1 = i1_[p];
    std::vector<double> i2(n), i3(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      i2[i] = samples.at(i, p);
      i3[i] = samples.at(i, np + p);
      y[i] = i2[i] + i3[i];
    }
    const auto s2 = summarize(i2), s3 = summarize(i3), sy = summarize(y);
    ps.mean_i2 = s2.mean;
    ps.var_i2 = s2.variance;
    ps.se_i2 = s2.std_error;
    ps.mean_i3 = s3.mean;
    ps.var_i3 = s3.variance;
    ps.se_i3 = s3.std_error;
    ps.mean_y = ps.i1 + sy.mean;
    ps.var_y = sy.variance;
    ps.se_y = sy.std_error;
    ps.se_var_y = sy.variance_std_error;
    ps.discrete_var_i2 = discrete_variance(p);
    ps.isometry_i2 = config_.sigma == 0.0 ? 0.0 : isometry_variance(p);
    ps.refine_delta_i2 = config_.sigma == 0.0 ? 0.0 : refined[p] - ps.discrete_var_i2;

    if (config_.gamma != 0.0) {
      const double g2m = config_.gamma * config_.gamma * second_moment;
      const double e = config_.d == 1 ? 1.5 * config_.alpha - 1.0 : config_.alpha - 1.0;
      const double full = e <= 0.0 ? std::numeric_limits<double>::infinity()
                                   : profile_.l2_norm_sq() * std::pow(config_.lambda, -0.5 * config_.d) *
                                         std::pow(config_.t, e) / e;
      // Mass of G^2 outside the spatial window (d = 2: outside the inscribed disc, an upper bound).
      double outside = 0.0;
      for (std::size_t q = 0; q < t_nodes_.size(); ++q) {
        const double s = t_nodes_[q];
        const double w = std::sqrt(config_.lambda * std::pow(s, config_.alpha));
        const double factor = t_weights_[q] * std::pow(s, config_.alpha - 1.0) * std::pow(w, -config_.d);
        if (config_.d == 1) {
          const double left = (ps.x[0] - domain_.lower[1]) / w;
          const double right = (domain_.upper[1] - ps.x[0]) / w;
          outside += factor * 0.5 * (profile_.l2_tail(left) + profile_.l2_tail(right));
        } else {
          double radius = std::numeric_limits<double>::infinity();
          for (int l = 0; l < 2; ++l) {
            radius = std::min({radius, ps.x[l] - domain_.lower[l + 1], domain_.upper[l + 1] - ps.x[l]});
          }
          outside += factor * profile_.l2_tail(radius / w);
        }
      }
      ps.levy_tail = g2m * outside;
      ps.levy_var_exact = g2m * full - ps.levy_tail;
    }
    const double grid_bias = config_.sigma == 0.0 ? 0.0 : ps.isometry_i2 - ps.discrete_var_i2;
    ps.bias_estimate = grid_bias + ps.levy_tail;
    out.points.push_back(std::move(ps));
  }
  return out;
}

double discrete_brownian_variance(const HeatConfig& config, std::size_t point) {
  return HeatSolver(config).discrete_variance(point);
}

}  // namespace levy
