#pragma once

#include <string_view>

namespace levy {

struct MittagLefflerParams {
  double alpha = 1.0;  // in (0, 2]
  double beta = 1.0;   // > 0
  int k_max = 4000;    // series truncation cap
  double tolerance = 1e-14;  // accepted error, relative to max(1, |E|)

  void validate() const;
};

enum class MlRegime {
  automatic,
  series,       // power series in double precision
  series_quad,  // power series in binary128, for cancellation on the negative axis
  asymptotic,   // large-|z| expansion plus the exponentially small/large pole terms
  laplace,      // inverse Laplace transform on a parabolic contour
};

std::string_view regime_name(MlRegime regime) noexcept;

struct MlResult {
  double value = 0.0;
  MlRegime regime = MlRegime::automatic;
  bool converged = false;
  int terms = 0;
  double error_estimate = 0.0;
};

// E_{alpha,beta}(z) for real z. In automatic mode the regimes are tried in the
// order series, asymptotic (|z| >= 30), series_quad, laplace; the first one
// whose error estimate meets the tolerance wins. A forced regime is evaluated
// as is and reports its own estimate.
MlResult mittag_leffler_eval(const MittagLefflerParams& params, double z, MlRegime regime = MlRegime::automatic);

// Value only; throws std::runtime_error when no regime converges.
double mittag_leffler(double alpha, double beta, double z);

// 1 / Gamma(x), zero at the poles.
double reciprocal_gamma(double x);

}  // namespace levy
