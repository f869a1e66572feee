#include "levy/commands.hpp"

#include "levy/basis.hpp"
#include "levy/chaos.hpp"
#include "levy/fracheat.hpp"
#include "levy/mittag_leffler.hpp"
#include "levy/sheet.hpp"
#include "levy/whitenoise.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levy {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string joined(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v[i]);
  return s;
}

std::string joined(std::span<const int> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const RunConfig& config, const std::vector<std::string>& columns,
          const std::vector<std::string>& notes = {})
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out_ << "# levysheet " << config.command << "\n";
    out_ << "# seeding: Philox4x32-10 keyed by (seed, stream); Monte-Carlo sample i uses counter i, so any "
            "sample can be re-run alone and results do not depend on the worker count\n";
    for (const auto& n : notes) out_ << "# " << n << "\n";
    out_ << "# config begin\n";
    std::istringstream text(to_text(config));
    for (std::string line; std::getline(text, line);) out_ << "# " << line << "\n";
    out_ << "# config end\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

  fs::path finish() {
    out_.close();
    if (!out_) throw std::runtime_error("write error on " + path_.string());
    return path_;
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::vector<std::string> axis_columns(const std::string& prefix, std::size_t dim) {
  std::vector<std::string> c;
  for (std::size_t l = 1; l <= dim; ++l) c.push_back(prefix + std::to_string(l));
  return c;
}

std::vector<fs::path> simulate_sheet(const RunConfig& c, const fs::path& dir, std::ostream& log) {
  const auto measure = c.build_measure();
  const Domain domain = Domain::from_bounds(c.sheet_lower, c.sheet_upper);
  const std::size_t dim = domain.dim();
  std::vector<fs::path> written;

  auto cols = axis_columns("x", dim);
  cols.insert(cols.begin(), "path");
  auto jump_cols = cols;
  jump_cols.push_back("z");
  auto value_cols = cols;
  value_cols.push_back("value");
  CsvFile jumps(dir / "sheet_jumps.csv", c, jump_cols);
  CsvFile values(dir / "sheet_values.csv", c, value_cols);

  // Evaluation grid on [0, upper] per axis, last axis fastest.
  const std::size_t g = c.sheet_grid;
  std::size_t total = 1;
  for (std::size_t l = 0; l < dim; ++l) total *= g;
  std::vector<double> x(dim);
  std::size_t jump_total = 0;
  for (std::size_t p = 0; p < c.sheet_paths; ++p) {
    const LevySheetPath path = simulate_levy_sheet(measure, domain, c.epsilon, c.seed, p);
    jump_total += path.jump_count();
    for (std::size_t k = 0; k < path.jump_count(); ++k) {
      std::vector<std::string> r{std::to_string(p)};
      for (double v : path.location(k)) r.push_back(num(v));
      r.push_back(num(path.marks[k]));
      jumps.row(r);
    }
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      for (std::size_t l = dim; l-- > 0;) {
        x[l] = c.sheet_upper[l] * static_cast<double>(rest % g) / static_cast<double>(g - 1);
        rest /= g;
      }
      std::vector<std::string> r{std::to_string(p)};
      for (double v : x) r.push_back(num(v));
      r.push_back(num(sheet_value(path, x)));
      values.row(r);
    }
  }
  written.push_back(jumps.finish());
  written.push_back(values.finish());
  log << "simulated " << c.sheet_paths << " Levy sheet path(s), " << jump_total << " jumps in total\n";

  if (c.brownian) {
    auto bcols = axis_columns("lower", dim);
    for (auto& s : axis_columns("upper", dim)) bcols.push_back(s);
    bcols.insert(bcols.begin(), "path");
    bcols.push_back("increment");
    CsvFile cells(dir / "brownian_cells.csv", c, bcols);
    const std::vector<std::size_t> per_axis(dim, c.brownian_cells);
    const SheetGrid grid = SheetGrid::uniform(domain, per_axis);
    for (std::size_t p = 0; p < c.sheet_paths; ++p) {
      const BrownianSheetPath path = simulate_brownian_sheet(grid, c.seed, p);
      for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
        std::vector<std::size_t> idx(dim);
        std::size_t rest = flat;
        for (std::size_t l = dim; l-- > 0;) {
          const std::size_t n = grid.axes[l].size() - 1;
          idx[l] = rest % n;
          rest /= n;
        }
        std::vector<std::string> r{std::to_string(p)};
        for (std::size_t l = 0; l < dim; ++l) r.push_back(num(grid.axes[l][idx[l]]));
        for (std::size_t l = 0; l < dim; ++l) r.push_back(num(grid.axes[l][idx[l] + 1]));
        r.push_back(num(path.increments[flat]));
        cells.row(r);
      }
    }
    written.push_back(cells.finish());
  }
  return written;
}

std::vector<fs::path> basis_table(const RunConfig& c, const fs::path& dir, std::ostream& log) {
  const auto measure = c.build_measure();
  const OrthoPolySystem system = OrthoPolySystem::build(*measure, c.poly_degree);
  const TensorBasisOrdering ordering(c.basis_dim, c.basis_count);
  CsvFile csv(dir / "basis.csv", c, {"kind", "index", "sub_indices", "point", "value"});

  std::vector<double> grid(c.grid_points);
  for (std::size_t i = 0; i < c.grid_points; ++i) {
    grid[i] = c.grid_points == 1 ? c.grid_lo
                                 : c.grid_lo + (c.grid_hi - c.grid_lo) * static_cast<double>(i) /
                                                   static_cast<double>(c.grid_points - 1);
  }
  const auto dim = static_cast<std::size_t>(c.basis_dim);
  std::size_t total = 1;
  for (std::size_t l = 0; l < dim; ++l) total *= grid.size();
  std::vector<double> x(dim);
  for (std::size_t j = 1; j <= ordering.size(); ++j) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      for (std::size_t l = dim; l-- > 0;) {
        x[l] = grid[rest % grid.size()];
        rest /= grid.size();
      }
      csv.row({"e", std::to_string(j), joined(ordering.label(j)), joined(x), num(ordering.eval(j, x))});
    }
  }
  for (int j = 1; j <= system.size(); ++j) {
    for (double z : grid) csv.row({"p", std::to_string(j), "", num(z), num(system.p(j, z))});
  }
  for (std::size_t k = 1; k <= c.basis_count; ++k) {
    const auto [i, j] = kappa_inverse(static_cast<std::int64_t>(k));
    csv.row({"kappa", std::to_string(k), std::to_string(i) + ";" + std::to_string(j), "", std::to_string(k)});
  }
  log << "tabulated " << ordering.size() << " Hermite functions, " << system.size() << " polynomials (J_nu)\n";
  return {csv.finish()};
}

std::vector<fs::path> chaos_check(const RunConfig& c, const fs::path& dir, std::ostream& log) {
  const auto measure = c.build_measure();
  auto system = std::make_shared<const OrthoPolySystem>(OrthoPolySystem::build(*measure, c.poly_degree));
  auto ordering = std::make_shared<const TensorBasisOrdering>(c.chaos_dim, static_cast<std::size_t>(c.max_position));
  const std::vector<double> lo(static_cast<std::size_t>(c.chaos_dim), -c.half_width);
  const std::vector<double> hi(static_cast<std::size_t>(c.chaos_dim), c.half_width);
  const Domain domain = Domain::from_bounds(lo, hi);
  // Positions whose polynomial index exceeds J_nu have no basis element.
  std::int64_t usable = 0;
  while (usable < c.max_position && kappa_inverse(usable + 1).second <= system->size()) ++usable;
  if (usable == 0) throw std::invalid_argument("the measure supports no chaos basis element");
  const ChaosContext context(system, ordering, CompensatorRule::build(domain, *measure, 0.0), usable);
  const LevySheetSimulator simulator(measure, domain, 0.0);

  std::vector<MultiIndexAlpha> alphas;
  std::size_t dropped = 0;
  for (auto& a : enumerate_alphas(c.max_position, c.max_order)) {
    bool ok = true;
    for (const auto& [pos, value] : a.entries()) ok = ok && pos <= usable;
    if (ok) {
      alphas.push_back(std::move(a));
    } else {
      ++dropped;
    }
  }
  if (dropped) {
    log << "note: " << dropped << " multi-indices need polynomial indices beyond J_nu = " << system->size()
        << " and were skipped\n";
  }
  const auto report = orthogonality_matrix(context, simulator, alphas, c.n_samples, c.seed, c.workers);
  const std::size_t n = alphas.size();

  CsvFile matrix(dir / "chaos_matrix.csv", c, {"row", "col", "mean", "std_error", "expected", "z_score"},
                 {"samples: " + std::to_string(report.samples)});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t i = a * n + b;
      const double se = report.std_error[i];
      const double z = se > 0.0 ? (report.mean[i] - report.expected[i]) / se : 0.0;
      matrix.row({alphas[a].label(), alphas[b].label(), num(report.mean[i]), num(se), num(report.expected[i]), num(z)});
    }
  }
  CsvFile norms(dir / "chaos_norms.csv", c,
                {"alpha", "order", "alpha_factorial", "mean_K", "se_K", "second_moment", "se_second_moment"});
  for (std::size_t a = 0; a < n; ++a) {
    norms.row({alphas[a].label(), std::to_string(alphas[a].order()), std::to_string(alpha_factorial(alphas[a])),
               num(report.k_mean[a]), num(report.k_std_error[a]), num(report.mean[a * n + a]),
               num(report.std_error[a * n + a])});
  }
  log << "orthogonality: " << report.checks << " checks, " << report.failures << " outside 3 SE, max |z| "
      << report.max_abs_z << "\n";
  return {matrix.finish(), norms.finish()};
}

std::vector<fs::path> whitenoise_tables(const RunConfig& c, const fs::path& dir, std::ostream& log) {
  const auto measure = c.build_measure();
  const std::size_t J = c.wn_J.back();
  const WhiteNoiseBasis basis = WhiteNoiseBasis::make(measure, c.wn_dim, J, c.poly_degree);

  CsvFile coeffs(dir / "whitenoise_coefficients.csv", c, {"expansion", "alpha", "value"});
  auto dump = [&coeffs](const char* kind, const ChaosCoefficients& f) {
    for (const auto& [alpha, value] : f.terms()) coeffs.row({kind, alpha.label(), num(value)});
  };
  dump("sheet", sheet_expansion(basis, c.wn_x, J));
  dump("levy_noise", levy_noise_expansion(basis, c.wn_x, J));
  bool capped = false;
  dump("pnrm_noise", pnrm_noise_expansion(basis, c.wn_x, c.wn_z, J, c.J_prime, &capped));
  if (capped) log << "note: J_prime capped at J_nu = " << basis.j_nu() << "\n";

  CsvFile cov(dir / "whitenoise_covariance.csv", c, {"J", "partial_sum", "target", "error"});
  for (const auto& p : covariance_curve(basis, c.wn_x, c.wn_y, c.wn_J)) {
    cov.row({std::to_string(p.J), num(p.partial_sum), num(p.target), num(p.error)});
  }

  CsvFile hida(dir / "whitenoise_hida.csv", c,
               {"expansion", "q", "J", "J_reference", "partial", "total", "tail", "relative_tail"});
  const std::pair<const char*, ExpansionKind> kinds[] = {
      {"sheet", ExpansionKind::sheet}, {"levy_noise", ExpansionKind::levy_noise}, {"pnrm_noise", ExpansionKind::pnrm_noise}};
  for (const auto& [name, kind] : kinds) {
    for (std::size_t j : c.wn_J) {
      const NormTail t = hida_tail(basis, kind, c.wn_x, c.wn_z, c.q, j, J);
      hida.row({name, std::to_string(c.q), std::to_string(t.J), std::to_string(t.J_reference), num(t.partial),
                num(t.total), num(t.tail), num(t.relative_tail)});
    }
  }
  log << "white-noise expansions with J = " << J << "\n";
  return {coeffs.finish(), cov.finish(), hida.finish()};
}

MlRegime regime_from_name(const std::string& name) {
  for (MlRegime r : {MlRegime::automatic, MlRegime::series, MlRegime::series_quad, MlRegime::asymptotic, MlRegime::laplace}) {
    if (regime_name(r) == name) return r;
  }
  throw std::invalid_argument("unknown Mittag-Leffler regime '" + name + "'");
}

std::vector<fs::path> ml_eval(const RunConfig& c, const fs::path& dir, std::ostream& log) {
  MittagLefflerParams params;
  params.alpha = c.ml_alpha;
  params.beta = c.ml_beta;
  const MlRegime regime = regime_from_name(c.regime);
  CsvFile csv(dir / "ml.csv", c, {"z", "value", "regime", "converged", "terms", "error_estimate"});
  std::size_t failed = 0;
  for (std::size_t i = 0; i < c.z_points; ++i) {
    const double z = c.z_points == 1 ? c.z_lo
                                     : c.z_lo + (c.z_hi - c.z_lo) * static_cast<double>(i) /
                                                    static_cast<double>(c.z_points - 1);
    const MlResult r = mittag_leffler_eval(params, z, regime);
    failed += r.converged ? 0 : 1;
    csv.row({num(z), num(r.value), std::string(regime_name(r.regime)), r.converged ? "1" : "0",
             std::to_string(r.terms), num(r.error_estimate)});
  }
  if (failed) log << "warning: " << failed << " evaluations did not meet the tolerance\n";
  return {csv.finish()};
}

std::vector<fs::path> solve_heat(const RunConfig& c, const fs::path& dir, std::ostream& log) {
  const HeatConfig h = heat_config(c);
  const HeatSolver solver(h);
  const SolutionStats stats = solver.solve();
  std::vector<std::string> notes;
  for (const auto& w : stats.warnings) {
    notes.push_back("warning: " + w);
    log << "warning: " << w << "\n";
  }
  std::vector<std::string> cols = c.d == 1 ? std::vector<std::string>{"x"} : axis_columns("x", 2);
  for (const char* s : {"I1", "mean_Y", "var_Y", "se_Y", "bias_estimate", "mean_I2", "se_I2", "mean_I3", "se_I3",
                        "var_I2", "discrete_var_I2", "isometry_I2", "refine_delta_I2", "var_I3", "levy_var_window",
                        "levy_tail"}) {
    cols.push_back(s);
  }
  CsvFile csv(dir / "heat.csv", c, cols, notes);
  for (const auto& p : stats.points) {
    std::vector<std::string> r;
    for (double v : p.x) r.push_back(num(v));
    for (double v : {p.i1, p.mean_y, p.var_y, p.se_y, p.bias_estimate, p.mean_i2, p.se_i2, p.mean_i3, p.se_i3, p.var_i2,
                     p.discrete_var_i2, p.isometry_i2, p.refine_delta_i2, p.var_i3, p.levy_var_exact, p.levy_tail}) {
      r.push_back(num(v));
    }
    csv.row(r);
  }
  log << "solved at " << stats.points.size() << " points with " << stats.samples << " samples\n";
  return {csv.finish()};
}

}  // namespace

HeatConfig heat_config(const RunConfig& c) {
  HeatConfig h;
  h.alpha = c.alpha;
  h.lambda = c.lambda;
  h.sigma = c.sigma;
  h.gamma = c.gamma;
  h.d = c.d;
  h.t = c.t;
  h.points = c.points;
  h.x_max = c.x_max;
  h.time_cells = c.time_cells;
  h.time_grading = c.time_grading;
  h.space_step = c.space_step;
  h.time_nodes = c.time_nodes;
  if (c.gamma != 0.0) h.measure = c.build_measure();
  h.n_samples = c.n_samples;
  h.seed = c.seed;
  h.workers = c.workers;

  return h;
}

std::vector<fs::path> run_command(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  ensure_valid(config);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  const std::string& cmd = config.command;
  if (cmd == "simulate-sheet") return simulate_sheet(config, out_dir, log);
  if (cmd == "basis") return basis_table(config, out_dir, log);
  if (cmd == "chaos-check") return chaos_check(config, out_dir, log);
  if (cmd == "whitenoise") return whitenoise_tables(config, out_dir, log);
  if (cmd == "ml-eval") return ml_eval(config, out_dir, log);
  if (cmd == "solve-heat") return solve_heat(config, out_dir, log);
  throw std::invalid_argument("unknown subcommand '" + cmd + "'");
}

std::string config_from_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line, out;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line == "# config begin") {
      inside = true;
    } else if (line == "# config end") {
      return out;
    } else if (inside) {
      if (line.rfind("# ", 0) != 0) break;
      out += line.substr(2) + "\n";
    }
  }
  throw std::invalid_argument("no complete config block in CSV text");
}

std::string csv_body(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace levy
