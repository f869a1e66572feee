#pragma once

#include "levy/levy_measure.hpp"
#include "levy/mittag_leffler.hpp"
#include "levy/sheet.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace levy {

struct HeatConfig {
  double alpha = 1.0;   // Caputo order in (0, 2)
  double lambda = 1.0;  // diffusivity
  double sigma = 0.0;   // Brownian amplitude
  double gamma = 0.0;   // Levy amplitude
  int d = 1;
  double t = 1.0;
  std::vector<std::vector<double>> points;  // evaluation points, each of size d

  double x_max = 0.0;          // spatial half-width; 0 selects 8 diffusion widths
  int time_cells = 64;         // graded time mesh s_k = t (k / N)^grading
  double time_grading = 2.0;
  double space_step = 0.0;     // 0 selects width / 50 (d = 1) or width / 5 (d = 2)
  int time_nodes = 8;          // Gauss nodes per time cell

  std::shared_ptr<const LevyMeasure> measure;  // needed when gamma != 0
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;
  double diffusion_width() const;  // sqrt(lambda t^alpha)
  double resolved_x_max() const;
  double resolved_space_step() const;
};

// Radial similarity profile of the kernel
//   K_beta(s, r) = (2 pi)^-d int e^{i r.y} E_{alpha,beta}(-lambda s^alpha |y|^2) dy
//               = w^-d Phi(|r| / w),  w = sqrt(lambda s^alpha).
// Phi is computed by Gauss-Legendre quadrature of the Fourier integral on
// [0, V] plus the integrated large-argument expansion of E_{alpha,beta} on
// [V, infinity) (Si/Ci recurrences). d = 2 uses the Bessel form with
// J_0(c) = (2/pi) int_0^{pi/2} cos(c cos theta) d theta.
class KernelProfile {
 public:
  // table_points = 0 skips the table (direct evaluation only).
  KernelProfile(double alpha, double beta, int d, double rho_max = 60.0, std::size_t table_points = 12001);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  int dim() const noexcept { return d_; }
  double cutoff() const noexcept { return v_cut_; }

  // Direct quadrature (reference route).
  double direct(double rho) const;
  // Tabulated value with cubic interpolation; 0 beyond rho_max.
  double value(double rho) const;
  // d = 1: int_0^rho Phi (odd in rho); tends to 1 / (2 Gamma(beta)).
  double primitive(double rho) const;
  // int_{R^d} Phi^2 by Plancherel.
  double l2_norm_sq() const noexcept { return l2_norm_sq_; }
  // int over {|rho| > u} of Phi^2 (d = 1: both half-lines; d = 2: outside the disc), from the table.
  double l2_tail(double u) const;
  double rho_max() const noexcept { return rho_max_; }

 private:
  double fourier_tail_cos(double c, int first_power, int power_step) const;
  double psi_radial(double c) const;  // d = 2 helper: int_0^inf cos(c v) v E(-v^2) dv

  double alpha_, beta_;
  int d_;
  double v_cut_;
  std::vector<double> nodes_, weights_, e_values_;
  std::vector<double> asym_;  // coefficients a_m of v^{-2m}, m = 1..5
  double rho_max_, step_;
  std::vector<double> table_, primitive_, tail_sq_;
  double l2_norm_sq_ = 0.0;
};

// I_1(t, x) by direct quadrature.
double deterministic_term(const HeatConfig& config, std::span<const double> x);
// s^{alpha-1} K_alpha(s, r) by direct quadrature.
double greens_kernel(const HeatConfig& config, double s, std::span<const double> r);

struct PointStats {
  std::vector<double> x;
  double i1 = 0.0;
  double mean_i2 = 0.0, var_i2 = 0.0, se_i2 = 0.0;
  double mean_i3 = 0.0, var_i3 = 0.0, se_i3 = 0.0;
  double mean_y = 0.0, var_y = 0.0, se_y = 0.0, se_var_y = 0.0;
  double discrete_var_i2 = 0.0;  // exact variance of the discretized Brownian term
  double isometry_i2 = 0.0;      // sigma^2 int int G^2 (infinite when it diverges)
  double refine_delta_i2 = 0.0;  // discrete variance change when both steps are halved
  double levy_var_exact = 0.0;   // gamma^2 M int int G^2 over the simulated window
  double levy_tail = 0.0;        // gamma^2 M int int G^2 outside the window
  double bias_estimate = 0.0;    // variance bias of Y: grid + window truncation
};

struct SolutionStats {
  std::vector<PointStats> points;
  std::size_t samples = 0;
  std::vector<std::string> warnings;
};

class HeatSolver {
 public:
  explicit HeatSolver(HeatConfig config);

  const HeatConfig& config() const noexcept { return config_; }
  std::size_t point_count() const noexcept { return config_.points.size(); }
  const Domain& noise_domain() const noexcept { return domain_; }  // (time, space...) window
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::vector<double> deterministic() const { return i1_; }

  // One draw of I_2 at every point, driven by the Gaussian stream of (seed, sample).
  void stochastic_term_brownian(std::uint64_t seed, std::uint64_t sample, std::span<double> out) const;
  // I_3 at every point for a jump path on noise_domain() (time first).
  void stochastic_term_levy(const LevySheetPath& path, std::span<double> out) const;
  LevySheetPath simulate_levy_path(std::uint64_t seed, std::uint64_t sample) const;

  // Fast-path kernel s^{alpha-1} w^-d Phi(|r|/w) from the table.
  double kernel(double s, std::span<const double> r) const;
  // int over the window of the kernel at point p (the compensator mass).
  double kernel_mass(std::size_t p) const { return mass_[p]; }
  // sigma^2 sum W^2 / |cell|, the exact variance of the discretized I_2.
  double discrete_variance(std::size_t p) const;
  double isometry_variance(std::size_t p) const;  // sigma^2 int_0^t int_R^d G^2

  SolutionStats solve() const;

 private:
  void build_time_rule();
  void build_weights();

  HeatConfig config_;
  KernelProfile profile_;
  std::vector<double> i1_;
  Domain domain_;
  double x_max_, dz_;
  std::vector<double> s_edges_;
  std::vector<std::vector<double>> space_edges_;  // per spatial axis
  std::vector<double> t_nodes_, t_weights_;       // weights include s^{alpha-1}
  std::vector<std::size_t> t_cell_;               // cell index of each node
  std::vector<double> cell_sqrt_volume_;
  std::vector<std::vector<double>> coeff_;  // per point: W / |cell|
  std::vector<double> mass_;
  std::vector<std::string> warnings_;
  std::shared_ptr<const LevySheetSimulator> simulator_;
};

// Discrete I_2 variance for a config at the given grid (helper for the refinement study).
double discrete_brownian_variance(const HeatConfig& config, std::size_t point);

}  // namespace levy
