#pragma once

#include "levy/basis.hpp"
#include "levy/levy_measure.hpp"
#include "levy/montecarlo.hpp"
#include "levy/sheet.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace levy {

// Finitely supported multi-index: strictly increasing positions j >= 1 with
// values alpha_j >= 1. The empty index is the zero multi-index.
class MultiIndexAlpha {
 public:
  using Entry = std::pair<std::int64_t, int>;

  MultiIndexAlpha() = default;
  explicit MultiIndexAlpha(std::vector<Entry> entries);

  static MultiIndexAlpha unit(std::int64_t position);
  // Multiset of positions, e.g. {1, 1, 4} -> 2 at 1, 1 at 4.
  static MultiIndexAlpha from_positions(std::vector<std::int64_t> positions);
  // Inverse of label(): "0" or "1^2*4".
  static MultiIndexAlpha parse(const std::string& label);

  std::span<const Entry> entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }
  int order() const noexcept;              // |alpha|
  std::int64_t index() const noexcept;     // largest active position, 0 for zero
  int value_at(std::int64_t position) const noexcept;
  std::vector<std::int64_t> positions() const;  // expanded multiset, ascending
  std::string label() const;

  friend auto operator<=>(const MultiIndexAlpha&, const MultiIndexAlpha&) = default;
  friend bool operator==(const MultiIndexAlpha&, const MultiIndexAlpha&) = default;

 private:
  std::vector<Entry> entries_;
};

// Ordering used for reports: by |alpha|, then lexicographically by expanded positions.
bool graded_less(const MultiIndexAlpha& a, const MultiIndexAlpha& b);

// All alpha with positions in [1, max_position] and |alpha| <= max_order, in graded order.
std::vector<MultiIndexAlpha> enumerate_alphas(std::int64_t max_position, int max_order);

std::uint64_t alpha_factorial(const MultiIndexAlpha& alpha);

// prod_j (2j)^{k alpha_j}
double two_n_pow(const MultiIndexAlpha& alpha, int k);

// Sparse chaos coefficients. j_nu > 0 enables the compatibility check: every
// active position must map under kappa^{-1} to a polynomial index <= j_nu.
class ChaosCoefficients {
 public:
  ChaosCoefficients() = default;
  ChaosCoefficients(std::string measure_name, int dim, int j_nu);

  void set(const MultiIndexAlpha& alpha, double value);
  void add(const MultiIndexAlpha& alpha, double value);
  double get(const MultiIndexAlpha& alpha) const;

  const std::map<MultiIndexAlpha, double>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  const std::string& measure_name() const noexcept { return measure_name_; }
  int dim() const noexcept { return dim_; }
  int j_nu() const noexcept { return j_nu_; }

 private:
  void check(const MultiIndexAlpha& alpha) const;

  std::map<MultiIndexAlpha, double> terms_;
  std::string measure_name_;
  int dim_ = 0;
  int j_nu_ = 0;
};

// Squared norms: sum over alpha of alpha! c_alpha^2 (2N)^{k alpha}, resp. (2N)^{-q alpha}.
double hida_norm_k(const ChaosCoefficients& f, int k);
double hida_norm_neg_q(const ChaosCoefficients& f, int q);
double action(const ChaosCoefficients& f, const ChaosCoefficients& phi);
double generalized_expectation(const ChaosCoefficients& f);

// Symmetric function of m argument pairs: xs holds m points (point-major), zs m marks.
using TensorFunction = std::function<double(std::span<const double> xs, std::span<const double> zs)>;

// Exact pathwise I_m(g) for m <= 3 on a finite-activity path. Each slot is
// either a jump (distinct jumps across slots) or a node of the compensator
// rule; every compensated slot contributes a factor -1.
double iterated_integral(const LevySheetPath& path, const TensorFunction& g, int m, const CompensatorRule& rule);
double iterated_integral(const LevySheetPath& path, const TensorFunction& g, int m);

// The symmetrized tensor theta^{(x) alpha} of order |alpha|, averaged over slot permutations.
TensorFunction symmetrized_theta(const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                                 const TensorBasisOrdering& ordering);

void check_alpha_compatible(const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                            const TensorBasisOrdering& ordering);

// K_alpha = I_|alpha|(theta^{sym alpha}) through the generic iterated integral.
double k_alpha_sample(const LevySheetPath& path, const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                      const TensorBasisOrdering& ordering, const CompensatorRule& rule);
double k_alpha_sample(const LevySheetPath& path, const MultiIndexAlpha& alpha, const OrthoPolySystem& system,
                      const TensorBasisOrdering& ordering);

// Precomputed data for evaluating many K_alpha on many paths. The compensator
// masses mu(theta_k) use the same rule as the generic route, so both routes
// agree to rounding.
class ChaosContext {
 public:
  ChaosContext(std::shared_ptr<const OrthoPolySystem> system, std::shared_ptr<const TensorBasisOrdering> ordering,
               CompensatorRule rule, std::int64_t max_position);

  std::int64_t max_position() const noexcept { return max_position_; }
  double theta_mass(std::int64_t k) const { return mass_.at(static_cast<std::size_t>(k - 1)); }
  double theta(std::int64_t k, std::span<const double> x, double z) const;
  const OrthoPolySystem& system() const noexcept { return *system_; }
  const TensorBasisOrdering& ordering() const noexcept { return *ordering_; }
  const CompensatorRule& rule() const noexcept { return rule_; }

  // K_alpha for every alpha on one path, via the product-tensor expansion
  // I_m(f_1 x ... x f_m) = sum_S (-1)^|S| prod_{S} mu(f_i) D(rest), with D the
  // distinct-jump sums obtained from power sums by Moebius inversion.
  void evaluate(const LevySheetPath& path, std::span<const MultiIndexAlpha> alphas, std::span<double> out) const;
  double evaluate(const LevySheetPath& path, const MultiIndexAlpha& alpha) const;

 private:
  std::shared_ptr<const OrthoPolySystem> system_;
  std::shared_ptr<const TensorBasisOrdering> ordering_;
  CompensatorRule rule_;
  std::int64_t max_position_;
  std::vector<double> mass_;
};

struct CoefficientEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// (1 / alpha!) * mean(F * K_alpha) over shared seeds.
CoefficientEstimate estimate_coefficient(std::span<const double> f_samples, std::span<const double> k_samples,
                                         const MultiIndexAlpha& alpha);

struct OrthogonalityReport {
  std::vector<MultiIndexAlpha> alphas;
  std::size_t samples = 0;
  std::vector<double> mean;       // row-major |alphas|^2, E[K_a K_b]
  std::vector<double> std_error;
  std::vector<double> expected;   // delta_ab alpha!
  std::vector<double> k_mean;     // E[K_a]
  std::vector<double> k_std_error;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double max_abs_z = 0.0;  // largest |mean - expected| / std_error among pairs with nonzero spread

  bool all_within() const noexcept { return failures == 0; }
};

// Monte-Carlo orthogonality matrix over simulated paths (upper triangle checked,
// full matrix filled symmetrically).
OrthogonalityReport orthogonality_matrix(const ChaosContext& context, const LevySheetSimulator& simulator,
                                         std::span<const MultiIndexAlpha> alphas, std::size_t n_seeds,
                                         std::uint64_t seed, unsigned workers = 1, double n_se = 3.0);

}  // namespace levy
