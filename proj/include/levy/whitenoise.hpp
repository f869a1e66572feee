#pragma once

#include "levy/basis.hpp"
#include "levy/chaos.hpp"
#include "levy/levy_measure.hpp"
#include "levy/sheet.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace levy {

enum class ExpansionKind { sheet, levy_noise, pnrm_noise };

// Shared basis data for the truncated expansions: the measure, its orthonormal
// polynomials and a tensor Hermite ordering with at least `basis_count` elements.
struct WhiteNoiseBasis {
  std::shared_ptr<const LevyMeasure> measure;
  std::shared_ptr<const OrthoPolySystem> system;
  std::shared_ptr<const TensorBasisOrdering> ordering;
  double m2 = 0.0;
  int nodes_per_unit = 32;  // Gauss-Legendre nodes per unit length for int_0^x e_i

  static WhiteNoiseBasis make(std::shared_ptr<const LevyMeasure> measure, int dim, std::size_t basis_count,
                              int poly_degree = 4);

  int dim() const noexcept { return ordering->dim(); }
  int j_nu() const noexcept { return system->size(); }
  ChaosCoefficients empty_coefficients() const;
};

// Default truncation: 200 for n = 1; all labels of total degree <= 61 for n = 2.
std::size_t default_truncation(int dim);

// int_{[0,x]} e_i for i = 1..J, via per-axis composite Gauss-Legendre.
std::vector<double> hermite_box_integrals(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J);
// e_i(x) for i = 1..J.
std::vector<double> hermite_point_values(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J);

ChaosCoefficients sheet_expansion(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J);
ChaosCoefficients levy_noise_expansion(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J);
// The z-index is capped at J_nu; capped_out (if given) reports whether the cap was hit.
ChaosCoefficients pnrm_noise_expansion(const WhiteNoiseBasis& basis, std::span<const double> x, double z,
                                       std::size_t J, int J_prime, bool* capped_out = nullptr);
// Integrates the pnrm expansion against zeta nu(d zeta).
ChaosCoefficients pnrm_to_levy_reduction(const WhiteNoiseBasis& basis, std::span<const double> x, std::size_t J,
                                         int J_prime);

// m2^2 sum_{i<=J} (int_0^x e_i)(int_0^y e_i).
double covariance_partial_sum(const WhiteNoiseBasis& basis, std::span<const double> x, std::span<const double> y,
                              std::size_t J);
// M prod_l min(x_l, y_l), the J -> infinity limit.
double covariance_target(const WhiteNoiseBasis& basis, std::span<const double> x, std::span<const double> y);

struct CovariancePoint {
  std::size_t J = 0;
  double partial_sum = 0.0;
  double target = 0.0;
  double error = 0.0;  // target - partial_sum
};

// Partial sums at each requested J (increasing), sharing one set of box integrals.
std::vector<CovariancePoint> covariance_curve(const WhiteNoiseBasis& basis, std::span<const double> x,
                                              std::span<const double> y, std::span<const std::size_t> Js);

struct RadonNikodymCheck {
  ChaosCoefficients direct;      // (int_0^x e_i)(int_U p_j dnu)
  ChaosCoefficients integrated;  // pnrm coefficients integrated over [0,x] x U
  double max_abs_difference = 0.0;
};

// Coefficients of N~([0,x] x U) computed two ways.
RadonNikodymCheck radon_nikodym_check(const WhiteNoiseBasis& basis, std::span<const double> x, const MarkSet& marks,
                                      std::size_t J, int J_prime);

struct NormTail {
  std::size_t J = 0;
  std::size_t J_reference = 0;
  double partial = 0.0;    // ||F_J||_{-q}^2
  double total = 0.0;      // ||F_{J_reference}||_{-q}^2
  double tail = 0.0;       // total - partial
  double relative_tail = 0.0;
};

// Tail of the ||.||_{-q} partial sums of an expansion kind at a point (z used for pnrm_noise).
NormTail hida_tail(const WhiteNoiseBasis& basis, ExpansionKind kind, std::span<const double> x, double z, int q,
                   std::size_t J, std::size_t J_reference);

// Sum_k c_k K_{eps^(k)} on a path for first-order coefficients. The compensator
// part is fixed by the rule and computed once.
class FirstOrderFunctional {
 public:
  FirstOrderFunctional(const ChaosCoefficients& coefficients, const WhiteNoiseBasis& basis,
                       const CompensatorRule& rule);

  double sample(const LevySheetPath& path) const;
  double compensator() const noexcept { return compensator_; }

 private:
  double jump_value(std::span<const double> x, double z) const;

  std::vector<std::pair<std::size_t, int>> index_;  // (i, j) per term
  std::vector<double> coeff_;
  WhiteNoiseBasis basis_;
  int max_entry_ = 1;
  double compensator_ = 0.0;
};

}  // namespace levy
