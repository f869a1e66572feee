#include "levy/mittag_leffler.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

extern "C" {
#include <quadmath.h>
}

namespace levy {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kAsymptoticRadius = 30.0;
constexpr int kAsymptoticMaxTerms = 400;
constexpr int kQuadMaxTerms = 40000;

bool is_integer(double x) { return std::floor(x) == x; }

double accept_scale(double v) { return std::max(1.0, std::abs(v)); }

// log of |z|^k / Gamma(alpha k + beta) for k >= 1 (z != 0).
double log_term(double alpha, double beta, double log_abs_z, int k) {
  return k * log_abs_z - std::lgamma(alpha * k + beta);
}

MlResult series_double(const MittagLefflerParams& p, double z) {
  MlResult r;
  r.regime = MlRegime::series;
  if (z == 0.0) {
    r.value = reciprocal_gamma(p.beta);
    r.converged = true;
    r.terms = 1;
    return r;
  }
  const double log_abs_z = std::log(std::abs(z));
  double sum = 0.0, abs_sum = 0.0, rounding = 0.0, last = 0.0;
  for (int k = 0; k <= p.k_max; ++k) {
    const double arg = p.alpha * k + p.beta;
    double t;
    if (arg < 170.0 && k * log_abs_z < 690.0) {
      t = std::pow(z, k) * reciprocal_gamma(arg);
      rounding += 2.0 * kEps * std::abs(t);
    } else {
      const double lt = log_term(p.alpha, p.beta, log_abs_z, k);
      if (lt > 700.0) {
        r.terms = k;
        r.error_estimate = std::numeric_limits<double>::infinity();
        r.value = sum;
        return r;
      }
      t = ((z < 0.0 && (k & 1)) ? -1.0 : 1.0) * std::exp(lt);
      rounding += (2.0 + std::abs(lt)) * kEps * std::abs(t);
    }
    sum += t;
    abs_sum += std::abs(t);
    r.terms = k + 1;
    if (k > 0 && std::abs(t) <= 1e-17 * accept_scale(sum) && std::abs(t) <= std::abs(last)) {
      r.converged = true;
      last = t;
      break;
    }
    last = t;
  }
  r.value = sum;
  r.error_estimate = rounding + 2.0 * kEps * abs_sum + std::abs(last);
  r.converged = r.converged && r.error_estimate <= p.tolerance * accept_scale(sum);
  return r;
}

// Largest log-term and the index beyond which terms fall below e^-80.
struct SeriesShape {
  double max_log = 0.0;
  int needed = 0;
};

SeriesShape series_shape(double alpha, double beta, double z, int cap) {
  SeriesShape s;
  s.max_log = -std::lgamma(beta);
  const double log_abs_z = std::log(std::abs(z));
  for (int k = 1; k <= cap; ++k) {
    const double lt = log_term(alpha, beta, log_abs_z, k);
    s.max_log = std::max(s.max_log, lt);
    if (lt < s.max_log - 100.0 && lt < -80.0) {
      s.needed = k;
      return s;
    }
  }
  s.needed = cap + 1;
  return s;
}

MlResult series_quad(const MittagLefflerParams& p, double z, double max_log_limit) {
  MlResult r;
  r.regime = MlRegime::series_quad;
  if (z == 0.0) {
    r = series_double(p, z);
    r.regime = MlRegime::series_quad;
    return r;
  }
  const SeriesShape shape = series_shape(p.alpha, p.beta, z, kQuadMaxTerms);
  if (shape.needed > kQuadMaxTerms || shape.max_log > max_log_limit) {
    r.error_estimate = std::numeric_limits<double>::infinity();
    return r;
  }
  const __float128 qz = z;
  const __float128 qa = p.alpha;
  const __float128 qb = p.beta;
  const __float128 log_abs_z = logq(fabsq(qz));
  __float128 sum = 0, abs_sum = 0;
  __float128 last = 0;
  for (int k = 0; k <= shape.needed + 8; ++k) {
    const __float128 arg = qa * k + qb;
    __float128 t;
    if (k == 0) {
      t = 1 / tgammaq(qb);
    } else {
      int sign = 1;
      const __float128 lg = lgammaq(arg);
      t = expq(k * log_abs_z - lg);
      if (z < 0.0 && (k & 1)) sign = -1;
      t *= sign;
    }
    sum += t;
    abs_sum += fabsq(t);
    last = t;
    r.terms = k + 1;
  }
  r.value = static_cast<double>(sum);
  // Each term carries a relative error of a few units of the binary128
  // epsilon times the size of its log.
  const double qeps = 1.925929944387235853e-34;
  r.error_estimate = (8.0 + std::abs(shape.max_log)) * qeps * static_cast<double>(abs_sum) +
                     static_cast<double>(fabsq(last)) + kEps * std::abs(r.value) * 0.5;
  r.converged = r.error_estimate <= p.tolerance * accept_scale(r.value);
  return r;
}

MlResult asymptotic(const MittagLefflerParams& p, double z) {
  MlResult r;
  r.regime = MlRegime::asymptotic;
  if (z == 0.0) {
    r.error_estimate = std::numeric_limits<double>::infinity();
    return r;
  }
  const double a = p.alpha, b = p.beta;
  // Divergent series, truncated where the envelope |z|^-m |1/Gamma(b - a m)|
  // is smallest. For b - a m <= 0 the reflection bound Gamma(1 - b + a m) / pi
  // stands in, so terms that happen to sit near a pole do not stop the sum.
  const double log_az = std::log(std::abs(z));
  auto log_envelope = [&](int m) {
    const double x = b - a * m;
    const double lg = x > 0.0 ? -std::lgamma(x) : std::lgamma(1.0 - x) - std::log(std::numbers::pi);
    return lg - m * log_az;
  };
  double sum = 0.0;
  int m = 1;
  double prev = log_envelope(1);
  // z^-m / Gamma(b - a m) in log form; reflection for negative arguments.
  auto term = [&](int m) {
    const double x = b - a * m;
    double log_mag, sign;
    if (x > 0.0) {
      log_mag = -std::lgamma(x);
      sign = 1.0;
    } else {
      if (is_integer(x)) return 0.0;  // pole of Gamma
      const double s = std::sin(std::numbers::pi * x);
      log_mag = std::lgamma(1.0 - x) + std::log(std::abs(s) / std::numbers::pi);
      sign = s > 0.0 ? 1.0 : -1.0;
    }
    if (z < 0.0 && (m & 1)) sign = -sign;
    return sign * std::exp(log_mag - m * log_az);
  };
  for (; m <= kAsymptoticMaxTerms; ++m) {
    const double env = m == 1 ? prev : log_envelope(m);
    if (m > 1 && env > prev) break;
    if (env < -745.0) break;  // remaining terms are below the double range
    sum -= term(m);
    prev = env;
  }
  // remainder of an optimally truncated series: the smallest term times O(sqrt(m))
  double err = (1.0 + std::sqrt(static_cast<double>(m))) * std::exp(log_envelope(m));
  // integer alpha and beta: every omitted term sits on a pole
  if (is_integer(a) && is_integer(b) && b - a * m <= 0.0) err = 0.0;
  r.terms = m - 1;

  // Poles of s^(alpha-beta) / (s^alpha - z) on the principal sheet.
  const double az = std::abs(z);
  if (z > 0.0) {
    const double s = std::pow(z, 1.0 / a);
    sum += std::exp(s) * std::pow(s, 1.0 - b) / a;
  } else if (a == 1.0) {
    if (is_integer(b)) {
      sum += std::exp(z) * std::pow(z, 1.0 - b);
    } else {
      err += std::exp(z) * std::pow(az, 1.0 - b);
    }
  } else if (a > 1.0) {
    const std::complex<double> s = std::polar(std::pow(az, 1.0 / a), std::numbers::pi / a);
    sum += 2.0 / a * std::real(std::pow(s, 1.0 - b) * std::exp(s));
  }
  r.value = sum;
  r.error_estimate = err;
  r.converged = az >= kAsymptoticRadius && err <= p.tolerance * accept_scale(sum);
  return r;
}

double laplace_value(double a, double b, double z, int n) {
  // Trapezoid rule on s(u) = mu (1 + i u)^2, u in [-3, 3].
  const double h = 3.0 / n;
  const double mu = std::numbers::pi * n / 12.0;
  std::complex<double> acc{0.0, 0.0};
  const std::complex<double> i1{0.0, 1.0};
  for (int k = -n; k <= n; ++k) {
    const double u = k * h;
    const std::complex<double> w = 1.0 + i1 * u;
    const std::complex<double> s = mu * w * w;
    const std::complex<double> ds = 2.0 * i1 * mu * w;
    const std::complex<double> f = std::pow(s, a - b) / (std::pow(s, a) - z);
    acc += std::exp(s) * f * ds;
  }
  double value = std::real(acc * h / (2.0 * std::numbers::pi * i1));
  // Poles to the right of the contour are not enclosed by it.
  auto outside = [mu](std::complex<double> s) { return s.real() > mu - s.imag() * s.imag() / (4.0 * mu); };
  const double az = std::abs(z);
  if (z > 0.0) {
    const std::complex<double> s = std::pow(z, 1.0 / a);
    if (outside(s)) value += std::real(std::exp(s) * std::pow(s, 1.0 - b)) / a;
  } else if (z < 0.0 && a > 1.0) {
    const std::complex<double> s = std::polar(std::pow(az, 1.0 / a), std::numbers::pi / a);
    if (outside(s)) value += 2.0 / a * std::real(std::pow(s, 1.0 - b) * std::exp(s));
  }
  return value;
}

MlResult laplace(const MittagLefflerParams& p, double z) {
  MlResult r;
  r.regime = MlRegime::laplace;
  const double coarse = laplace_value(p.alpha, p.beta, z, 24);
  r.value = laplace_value(p.alpha, p.beta, z, 32);
  r.terms = 65;
  r.error_estimate = std::abs(r.value - coarse);
  r.converged = r.error_estimate <= 1e-10 * accept_scale(r.value);
  return r;
}

}  // namespace

void MittagLefflerParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("Mittag-Leffler alpha must lie in (0, 2]");
  if (!(beta > 0.0)) throw std::invalid_argument("Mittag-Leffler beta must be > 0");
  if (k_max < 1) throw std::invalid_argument("Mittag-Leffler k_max must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("Mittag-Leffler tolerance must be > 0");
}

std::string_view regime_name(MlRegime regime) noexcept {
  switch (regime) {
    case MlRegime::automatic: return "automatic";
    case MlRegime::series: return "series";
    case MlRegime::series_quad: return "series_quad";
    case MlRegime::asymptotic: return "asymptotic";
    case MlRegime::laplace: return "laplace";
  }
  return "unknown";
}

double reciprocal_gamma(double x) {
  if (x <= 0.0 && is_integer(x)) return 0.0;
  if (x > 171.0) return std::exp(-std::lgamma(x));
  return 1.0 / std::tgamma(x);
}

MlResult mittag_leffler_eval(const MittagLefflerParams& params, double z, MlRegime regime) {
  params.validate();
  if (!std::isfinite(z)) throw std::invalid_argument("Mittag-Leffler argument must be finite");
  switch (regime) {
    case MlRegime::series: return series_double(params, z);
    case MlRegime::series_quad: return series_quad(params, z, 11000.0);
    case MlRegime::asymptotic: return asymptotic(params, z);
    case MlRegime::laplace: return laplace(params, z);
    case MlRegime::automatic: break;
  }
  MlResult best = series_double(params, z);
  if (best.converged) return best;
  auto keep = [&best](const MlResult& r) {
    if (r.converged || r.error_estimate < best.error_estimate) best = r;
    return r.converged;
  };
  if (std::abs(z) >= kAsymptoticRadius && keep(asymptotic(params, z))) return best;
  // Beyond e^45 the binary128 rounding alone exceeds the tolerance.
  if (keep(series_quad(params, z, 45.0))) return best;
  keep(laplace(params, z));
  return best;
}

double mittag_leffler(double alpha, double beta, double z) {
  MittagLefflerParams p;
  p.alpha = alpha;
  p.beta = beta;
  const MlResult r = mittag_leffler_eval(p, z);
  if (!r.converged) {
    throw std::runtime_error("Mittag-Leffler evaluation did not converge at z = " + std::to_string(z));
  }
  return r.value;
}

}  // namespace levy
