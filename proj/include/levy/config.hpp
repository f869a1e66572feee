#pragma once

#include "levy/levy_measure.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace levy {

// Run configuration shared by all subcommands. The text form is line oriented:
//
//   # comment
//   [section]
//   key = value
//
// Values are JSON literals (numbers, "strings", true/false, nested lists) or
// bare words, which are read as strings.
struct RunConfig {
  // [run]
  std::string command;
  std::string preset;
  std::string out = ".";
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t n_samples = 1000;

  // [measure]
  std::string measure_kind = "atoms";  // atoms | density
  std::vector<std::array<double, 2>> atoms = {{-1.0, 0.5}, {1.0, 0.5}};
  std::string density = "uniform";  // uniform | power | exponential
  double density_scale = 1.0;
  double density_parameter = 0.0;
  double density_inner = 0.1;
  double density_outer = 1.0;
  std::string density_sides = "both";  // both | negative | positive
  std::size_t nodes_per_side = 64;

  // [sheet]
  std::vector<double> sheet_lower = {0.0};
  std::vector<double> sheet_upper = {1.0};
  double epsilon = 0.0;
  std::size_t sheet_paths = 1;
  std::size_t sheet_grid = 11;  // evaluation nodes per axis
  bool brownian = false;
  std::size_t brownian_cells = 10;  // cells per axis

  // [basis]
  int basis_dim = 1;
  std::size_t basis_count = 6;
  int poly_degree = 4;
  double grid_lo = -3.0;
  double grid_hi = 3.0;
  std::size_t grid_points = 13;

  // [chaos]
  int chaos_dim = 1;
  std::int64_t max_position = 6;
  int max_order = 2;
  double half_width = 8.0;

  // [whitenoise]
  int wn_dim = 1;
  std::vector<double> wn_x = {1.0};
  std::vector<double> wn_y = {1.0};
  double wn_z = 1.0;
  std::vector<std::size_t> wn_J = {25, 50, 100, 200, 400};
  int J_prime = 4;
  int q = 2;

  // [ml]
  double ml_alpha = 1.0;
  double ml_beta = 1.0;
  double z_lo = -10.0;
  double z_hi = 10.0;
  std::size_t z_points = 21;
  std::string regime = "automatic";

  // [heat]
  double alpha = 1.0;
  double lambda = 1.0;
  double sigma = 1.0;
  double gamma = 0.0;
  int d = 1;
  double t = 1.0;
  std::vector<std::vector<double>> points = {{0.0}};
  double x_max = 0.0;
  int time_cells = 64;
  double time_grading = 2.0;
  double space_step = 0.0;
  int time_nodes = 8;

  std::shared_ptr<const LevyMeasure> build_measure() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// All problems found in a config, one message per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

extern const std::vector<std::string> kCommands;
extern const std::vector<std::string> kPresets;

// Parses text on top of `base` (defaults when omitted) and validates the result.
// A [run] preset key is applied before the remaining keys.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const std::string& text, RunConfig base);

// Every range/consistency problem of the config; empty when valid.
std::vector<std::string> validate_config(const RunConfig& config);
void ensure_valid(const RunConfig& config);

void apply_preset(RunConfig& config, const std::string& name);

// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& config);

}  // namespace levy
