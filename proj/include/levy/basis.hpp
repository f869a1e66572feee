#pragma once

#include "levy/levy_measure.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace levy {

// Hermite functions are supported up to this index; the scaled recurrence is
// stable well beyond it, but no expansion here needs more.
inline constexpr int kMaxHermiteIndex = 20000;

// Probabilists' Hermite polynomial He_n (h_2 = x^2 - 1).
double hermite_poly(int n, double x);

// Normalized Hermite function xi_n, n >= 1:
//   xi_n(x) = pi^{-1/4} ((n-1)!)^{-1/2} exp(-x^2/2) He_{n-1}(sqrt(2) x),
// evaluated by the normalized three-term recurrence with log-scale tracking.
double hermite_function(int n, double x);

// xi_1..xi_count at x into out[0..count).
void hermite_functions(int count, double x, std::span<double> out);

// xi_1..xi_count at every point; out[k * xs.size() + p] = xi_{k+1}(xs[p]).
void hermite_functions_batch(int count, std::span<const double> xs, std::span<double> out);

// Cantor-type pairing kappa(i, j) = j + (i + j - 2)(i + j - 1) / 2 on N x N.
std::int64_t kappa(std::int64_t i, std::int64_t j);
std::pair<std::int64_t, std::int64_t> kappa_inverse(std::int64_t k);

// Graded-lexicographic enumeration of beta in N^n (entries >= 1), giving the
// tensor Hermite basis e_j = xi_{beta_1} x ... x xi_{beta_n} of L^2(R^n).
class TensorBasisOrdering {
 public:
  TensorBasisOrdering(int dim, std::size_t count);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return count_; }

  // Label of e_j, j in [1, size()].
  std::span<const int> label(std::size_t j) const;
  int max_label_entry() const noexcept { return max_entry_; }

  double eval(std::size_t j, std::span<const double> x) const;

 private:
  int dim_;
  std::size_t count_;
  int max_entry_ = 1;
  std::vector<int> labels_;
};

// Orthonormal polynomial system {p_j} in L^2(nu) obtained from Gram-Schmidt of
// 1, z, z^2, ... in L^2(rho), rho(dz) = z^2 nu(dz), and p_j = z eta_{j-1} / ||eta_{j-1}||.
class OrthoPolySystem {
 public:
  static OrthoPolySystem build(const LevyMeasure& measure, int max_degree);

  // Number of available p_j (J_nu); can be below the requested degree when
  // L^2(rho) is finite dimensional.
  int size() const noexcept { return static_cast<int>(p_coeffs_.size()); }
  int requested_degree() const noexcept { return requested_; }
  double m2() const noexcept { return m2_; }

  // Monomial coefficients, lowest degree first.
  std::span<const double> p_coefficients(int j) const;
  std::span<const double> eta_coefficients(int j) const;
  double eta_norm(int j) const;

  double p(int j, double z) const;
  double eta(int j, double z) const;

 private:
  int requested_ = 0;
  double m2_ = 0.0;
  std::vector<std::vector<double>> eta_coeffs_;
  std::vector<double> eta_norms_;
  std::vector<std::vector<double>> p_coeffs_;
};

// theta_k(x, z) = e_i(x) p_j(z) with (i, j) = kappa_inverse(k).
double theta_eval(const OrthoPolySystem& system, const TensorBasisOrdering& ordering, std::int64_t k,
                  std::span<const double> x, double z);

double evaluate_polynomial(std::span<const double> coefficients, double z) noexcept;

}  // namespace levy
