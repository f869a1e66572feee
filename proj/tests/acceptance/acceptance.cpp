// Acceptance harness: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N] [--workers W]
//
// Exit status is 0 only when every selected criterion passes.
#include "levy/basis.hpp"
#include "levy/chaos.hpp"
#include "levy/commands.hpp"
#include "levy/config.hpp"
#include "levy/fracheat.hpp"
#include "levy/mittag_leffler.hpp"
#include "levy/montecarlo.hpp"
#include "levy/rng.hpp"
#include "levy/sheet.hpp"
#include "levy/whitenoise.hpp"

#include <algorithm>
#include <stdexcept>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace levy;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned g_workers = 1;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string g(double v) { return fmt("%.4g", v); }

std::shared_ptr<const LevyMeasure> two_point() {
  return std::make_shared<const LevyMeasure>(LevyMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}}));
}

std::shared_ptr<const LevyMeasure> three_atoms() {
  return std::make_shared<const LevyMeasure>(LevyMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}, {2.0, 0.25}}));
}

// 1. Orthonormal polynomials of the two-point measure.
Outcome orthonormal_polys() {
  const auto nu = two_point();
  const auto sys = OrthoPolySystem::build(*nu, 4);
  double worst = 0.0;
  // hand Gram-Schmidt on {z, z^2}: <z,z> = 1, <z,z^2> = 0, <z^2,z^2> = 1
  const auto oracle = [](int j, double z) { return j == 1 ? z : z * z; };
  if (sys.size() != 2) return {false, "expected 2 polynomials, got " + std::to_string(sys.size())};
  for (double z : {-1.0, 1.0, 0.37, 2.5}) {
    for (int j = 1; j <= 2; ++j) worst = std::max(worst, std::abs(sys.p(j, z) - oracle(j, z)));
  }
  double gram = 0.0;
  for (int a = 1; a <= 2; ++a) {
    for (int b = 1; b <= 2; ++b) {
      const double v = nu->nu_inner([&](double z) { return sys.p(a, z); }, [&](double z) { return sys.p(b, z); });
      gram = std::max(gram, std::abs(v - (a == b ? 1.0 : 0.0)));
    }
  }
  return {worst <= 1e-10 && gram <= 1e-10, "max |p_j - oracle| = " + g(worst) + ", max |Gram - I| = " + g(gram)};
}

// 2. kappa bijection.
Outcome kappa_bijection() {
  std::set<std::int64_t> seen;
  std::size_t bad = 0;
  for (std::int64_t i = 1; i <= 30; ++i) {
    for (std::int64_t j = 1; j <= 30; ++j) {
      const auto k = kappa(i, j);
      if (!seen.insert(k).second) ++bad;
      if (kappa_inverse(k) != std::pair<std::int64_t, std::int64_t>{i, j}) ++bad;
    }
  }
  // onto: every k up to the largest complete diagonal is hit
  const std::int64_t full = 30 * 31 / 2;
  for (std::int64_t k = 1; k <= full; ++k) {
    if (!seen.count(k)) ++bad;
    const auto [i, j] = kappa_inverse(k);
    if (kappa(i, j) != k) ++bad;
  }
  return {bad == 0, std::to_string(seen.size()) + " distinct values, " + std::to_string(bad) + " violations"};
}

// 3. Characteristic function of a unit box increment.
Outcome cf_match() {
  const std::vector<double> u{0.5, 1.0, 2.0, 4.0};
  const auto dom = Domain::from_extents({1.0});
  const auto report = empirical_cf_check(two_point(), dom, Box::from_corners({0.0}, {1.0}), u, 100000, 3, g_workers);
  std::string d;
  bool ok = report.all_within;
  for (const auto& p : report.points) {
    const double target = std::exp(std::cos(p.u) - 1.0);
    ok = ok && std::abs(p.target.real() - target) < 1e-14 && std::abs(p.target.imag()) < 1e-14;
    d += "u=" + g(p.u) + ": dev " + g(p.deviation) + " / 3SE " + g(p.envelope) + "; ";
  }
  return {ok, d + "n=" + std::to_string(report.samples)};
}

// 4. Compensated integrals of phi(x) z: mean 0, variance M int phi^2.
Outcome lemma_statistics() {
  const auto nu = three_atoms();
  const double M = nu->moment(2);
  const auto dom = Domain::from_extents({1.0});
  struct Test {
    const char* name;
    std::function<double(double)> phi;
    double int_phi_sq;  // closed form on [0, 1]
  };
  const std::vector<Test> tests = {
      {"indicator[0.2,0.7]", [](double x) { return x >= 0.2 && x <= 0.7 ? 1.0 : 0.0; }, 0.5},
      {"cos(3x)", [](double x) { return std::cos(3.0 * x); }, 0.5 + std::sin(6.0) / 12.0},
      {"x^2", [](double x) { return x * x; }, 0.2},
  };
  const std::size_t n = 100000;
  const auto samples = run_samples(n, tests.size(), g_workers, [&](std::size_t i, std::span<double> row) {
    const auto path = simulate_levy_sheet(nu, dom, 0.0, 4, i);
    for (std::size_t t = 0; t < tests.size(); ++t) {
      const auto& phi = tests[t].phi;
      row[t] = jump_sum(path, [&](std::span<const double> x, double z) { return phi(x[0]) * z; });
    }
  });
  // compensator drift * int_0^1 phi in closed form (the indicator defeats quadrature)
  const std::vector<double> int_phi = {0.5, std::sin(3.0) / 3.0, 1.0 / 3.0};
  const double drift = nu->moment(1);
  bool ok = true;
  std::string d;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    auto col = samples.column(t);
    for (double& v : col) v -= drift * int_phi[t];
    const auto st = summarize(col);
    const double var = M * tests[t].int_phi_sq;
    const bool m_ok = st.mean_within(0.0), v_ok = st.variance_within(var);
    ok = ok && m_ok && v_ok;
    d += std::string(tests[t].name) + ": mean " + g(st.mean) + " (SE " + g(st.std_error) + "), var " +
         g(st.variance) + " vs " + g(var) + " (SE " + g(st.variance_std_error) + "); ";
  }
  return {ok, d};
}

// 5. Chaos orthogonality for |alpha| <= 2 over positions 1..6.
Outcome chaos_orthogonality() {
  // The two-point measure has only p_1, p_2, so position 6 = kappa(1, 3) needs a
  // measure with three atoms.
  const auto nu = three_atoms();
  const auto dom = Domain::from_bounds({-8.0}, {8.0});
  auto sys = std::make_shared<const OrthoPolySystem>(OrthoPolySystem::build(*nu, 3));
  auto ord = std::make_shared<const TensorBasisOrdering>(1, 6);
  const ChaosContext ctx(sys, ord, CompensatorRule::build(dom, *nu, 0.0), 6);
  const LevySheetSimulator sim(nu, dom);
  const auto alphas = enumerate_alphas(6, 2);
  const auto r = orthogonality_matrix(ctx, sim, alphas, 100000, 5, g_workers);
  // expected number of 3-SE exceedances among independent Gaussian checks
  const double expected_false = 0.0027 * static_cast<double>(r.checks);
  return {r.all_within(), std::to_string(alphas.size()) + " alphas, " + std::to_string(r.checks) + " checks, " +
                              std::to_string(r.failures) + " beyond 3 SE (max |z| " + g(r.max_abs_z) +
                              ", ~" + g(expected_false) + " expected by chance)"};
}

// 6. Pathwise product formula.
Outcome product_formula() {
  const auto nu = three_atoms();
  const auto dom = Domain::from_bounds({-3.0}, {3.0});
  const auto rule = CompensatorRule::build(dom, *nu, 0.0);
  const auto f = [](double x, double z) { return z * std::exp(-0.5 * x * x) + 0.3 * z * z * x; };
  const TensorFunction g1 = [&](std::span<const double> x, std::span<const double> z) { return f(x[0], z[0]); };
  const TensorFunction g1sq = [&](std::span<const double> x, std::span<const double> z) {
    return f(x[0], z[0]) * f(x[0], z[0]);
  };
  const TensorFunction g2 = [&](std::span<const double> x, std::span<const double> z) {
    return f(x[0], z[0]) * f(x[1], z[1]);
  };
  const double norm_sq = rule.integrate([&](std::span<const double> x, double z) { return f(x[0], z) * f(x[0], z); });
  const auto atoms = nu->nodes();
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    CounterRng rng(s, Stream::auxiliary);
    const int n = static_cast<int>(s % 6);
    std::vector<double> loc, marks;
    for (int k = 0; k < n; ++k) {
      loc.push_back(rng.uniform(dom.lower[0], dom.upper[0]));
      marks.push_back(atoms[static_cast<std::size_t>(rng.uniform() * atoms.size())].z);
    }
    const auto path = make_levy_path(nu, dom, 0.0, loc, marks);
    const double i1 = iterated_integral(path, g1, 1, rule);
    const double rhs = iterated_integral(path, g2, 2, rule) + iterated_integral(path, g1sq, 1, rule) + norm_sq;
    worst = std::max(worst, std::abs(i1 * i1 - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return {worst <= 1e-10, "100 paths with 0-5 jumps, max relative residual " + g(worst)};
}

// 7. Covariance partial sums at x = y = 1 with M = 1.
Outcome covariance_convergence() {
  const std::vector<std::size_t> Js{25, 50, 100, 200, 400, 800, 1600, 3200};
  const auto basis = WhiteNoiseBasis::make(two_point(), 1, Js.back());
  const std::vector<double> x{1.0};
  const auto curve = covariance_curve(basis, x, x, Js);
  bool monotone = true;
  for (std::size_t k = 1; k < curve.size(); ++k) monotone = monotone && curve[k].partial_sum >= curve[k - 1].partial_sum;
  const auto at400 = *std::find_if(curve.begin(), curve.end(), [](const auto& p) { return p.J == 400; });
  const double err400 = std::abs(at400.partial_sum - 1.0);
  // power-law fit of the error over the last doubling
  const auto& a = curve[curve.size() - 2];
  const auto& b = curve.back();
  const double rate = std::log(a.error / b.error) / std::log(static_cast<double>(b.J) / static_cast<double>(a.J));
  const double j_needed = static_cast<double>(b.J) * std::pow(b.error / 1e-3, 1.0 / rate);
  std::string d = "target " + g(at400.target) + ", |S(400) - 1| = " + g(err400) + ", monotone " +
                  (monotone ? "yes" : "no") + "; error ~ J^-" + fmt("%.3f", rate) + " (S(3200) error " +
                  g(b.error) + "), J ~ " + fmt("%.3g", j_needed) + " needed for 1e-3";
  return {err400 <= 1e-3 && monotone, d};
}

// 8. pnrm-to-Levy reduction identity.
Outcome reduction_identity() {
  const auto basis = WhiteNoiseBasis::make(three_atoms(), 1, 100);
  CounterRng rng(8, Stream::auxiliary);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::vector<double> x{rng.uniform(0.0, 4.0)};
    const auto red = pnrm_to_levy_reduction(basis, x, 100, 3);
    const auto noise = levy_noise_expansion(basis, x, 100);
    for (const auto& [alpha, v] : red.terms()) worst = std::max(worst, std::abs(v - noise.get(alpha)));
    for (const auto& [alpha, v] : noise.terms()) worst = std::max(worst, std::abs(v - red.get(alpha)));
  }
  return {worst <= 1e-12, "20 points, max coefficient difference " + g(worst)};
}

// 9. Hida-norm tails of the Levy white noise for q = 2.
Outcome hida_tails() {
  const std::size_t ref = 2000;
  const auto basis = WhiteNoiseBasis::make(three_atoms(), 1, ref);
  double worst = 0.0;
  for (double x : {0.25, 0.5, 1.0, 2.0, 3.5}) {
    const auto t = hida_tail(basis, ExpansionKind::levy_noise, std::vector<double>{x}, 1.0, 2, 200, ref);
    worst = std::max(worst, t.relative_tail);
  }
  return {worst < 1e-4, "5 points, J=200 vs J=" + std::to_string(ref) + ", max relative tail " + g(worst)};
}

// 10. Mittag-Leffler closed forms and regime overlap.
Outcome mittag_leffler_checks() {
  double e1 = 0.0, e2 = 0.0, overlap = 0.0;
  for (int i = -200; i <= 200; ++i) {
    const double z = 0.1 * i;
    const double ez = std::exp(z);
    e1 = std::max(e1, std::abs(mittag_leffler(1, 1, z) - ez) / std::max(1.0, ez));
  }
  for (int i = -400; i <= 400; ++i) {
    const double x = 0.025 * i;
    e2 = std::max(e2, std::abs(mittag_leffler(2, 1, -x * x) - std::cos(x)));
  }
  const double pairs[][2] = {{1.0, 1.0}, {0.9, 1.0}, {1.1, 1.1}};
  for (const auto& ab : pairs) {
    MittagLefflerParams p;
    p.alpha = ab[0];
    p.beta = ab[1];
    for (int i = 0; i <= 60; ++i) {
      const double z = -40.0 + 0.25 * i;
      const double a = mittag_leffler_eval(p, z, MlRegime::asymptotic).value;
      const double s = mittag_leffler_eval(p, z, MlRegime::series_quad).value;
      overlap = std::max(overlap, std::abs(a - s));
    }
  }
  return {e1 <= 1e-12 && e2 <= 1e-10 && overlap <= 1e-6,
          "E1 vs exp (relative to max(1,e^z)) " + g(e1) + "; E2(-x^2) vs cos " + g(e2) +
              "; asymptotic vs series on [-40,-25] " + g(overlap)};
}

// 11. Gaussian limit of the deterministic term.
Outcome classical_limit() {
  HeatConfig c;
  c.alpha = 1.0;
  c.lambda = 1.0;
  c.sigma = 0.0;
  c.gamma = 0.0;
  c.t = 1.0;
  c.points = {{0.0}};
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double x = -5.0 + 0.5 * i;
    const double exact = std::exp(-x * x / 4.0) / std::sqrt(4.0 * M_PI);
    worst = std::max(worst, std::abs(deterministic_term(c, std::vector<double>{x}) - exact) / exact);
  }
  const KernelProfile profile(1.0, 1.0, 1);
  const double mass = 2.0 * profile.primitive(profile.rho_max());
  const HeatSolver solver(c);
  const double window_mass = solver.kernel_mass(0) / c.t;
  const double mass_err = std::max(std::abs(mass - 1.0), std::abs(window_mass - 1.0));
  return {worst <= 1e-6 && mass_err <= 1e-4, "21 points, max relative error " + g(worst) + "; kernel mass " +
                                                  fmt("%.8f", mass) + ", solver window mass per unit time " +
                                                  fmt("%.8f", window_mass)};
}

// 12. Ito isometry of I_2 at alpha = 1.
Outcome ito_isometry() {
  HeatConfig c;
  c.alpha = 1.0;
  c.lambda = 1.0;
  c.t = 1.0;
  c.sigma = 1.0;
  c.gamma = 0.0;
  c.points = {{0.0}};
  c.space_step = 0.02;
  c.n_samples = 10000;
  c.seed = 12;
  c.workers = g_workers;
  const auto stats = HeatSolver(c).solve();
  const auto& p = stats.points.front();
  const double gap = std::abs(p.var_i2 - p.isometry_i2);
  const double allowed = 3.0 * p.se_var_y + p.bias_estimate;
  return {gap <= allowed, "MC var " + g(p.var_i2) + ", isometry " + g(p.isometry_i2) + ", discrete " +
                              g(p.discrete_var_i2) + ", |gap| " + g(gap) + " <= 3 SE (" + g(3.0 * p.se_var_y) +
                              ") + grid bias (" + g(p.bias_estimate) + ")"};
}

// 13. Centering for the tumor preset.
Outcome tumor_centering() {
  RunConfig rc;
  apply_preset(rc, "tumor");
  rc.n_samples = 10000;
  rc.workers = g_workers;
  const auto stats = HeatSolver(heat_config(rc)).solve();
  bool ok = true;
  double worst = 0.0;
  for (const auto& p : stats.points) {
    const double z2 = std::abs(p.mean_i2) / p.se_i2;
    const double z3 = std::abs(p.mean_i3) / p.se_i3;
    const double zy = std::abs(p.mean_y - p.i1) / p.se_y;
    worst = std::max({worst, z2, z3, zy});
    ok = ok && z2 <= 3.0 && z3 <= 3.0 && zy <= 3.0;
  }
  return {ok, std::to_string(stats.points.size()) + " points, " + std::to_string(stats.samples) +
                  " samples, largest |mean - target| / SE over I2, I3, Y - I1: " + g(worst)};
}

// 14. Determinism of every subcommand.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Largest relative difference between numeric fields of two CSV bodies;
// infinity when the layouts or any non-numeric field differ.
double body_difference(const std::string& a, const std::string& b) {
  std::istringstream sa(a), sb(b);
  std::string la, lb;
  double worst = 0.0;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(sa, la));
    const bool gb = static_cast<bool>(std::getline(sb, lb));
    if (ga != gb) return INFINITY;
    if (!ga) break;
    std::istringstream ca(la), cb(lb);
    std::string fa, fb;
    while (true) {
      const bool ha = static_cast<bool>(std::getline(ca, fa, ','));
      const bool hb = static_cast<bool>(std::getline(cb, fb, ','));
      if (ha != hb) return INFINITY;
      if (!ha) break;
      if (fa == fb) continue;
      char* ea = nullptr;
      char* eb = nullptr;
      const double va = std::strtod(fa.c_str(), &ea), vb = std::strtod(fb.c_str(), &eb);
      if (*ea || *eb) return INFINITY;
      worst = std::max(worst, std::abs(va - vb) / std::max(std::abs(va), std::abs(vb)));
    }
  }
  return worst;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("levy_acceptance_" + std::to_string(::getpid()));
  std::size_t files = 0, byte_mismatch = 0;
  double worst_workers = 0.0;
  for (const auto& cmd : kCommands) {
    RunConfig c;
    c.command = cmd;
    c.seed = 2024;
    c.n_samples = 2000;
    c.sheet_paths = 4;
    c.brownian = true;
    c.time_cells = 32;
    std::ostringstream log;
    c.workers = 1;
    const auto a = run_command(c, root / (cmd + "_a"), log);
    const auto b = run_command(c, root / (cmd + "_b"), log);
    c.workers = 4;
    const auto w = run_command(c, root / (cmd + "_w"), log);
    if (a.size() != b.size() || a.size() != w.size()) return {false, cmd + ": file lists differ"};
    for (std::size_t i = 0; i < a.size(); ++i) {
      ++files;
      const auto ba = csv_body(slurp(a[i]));
      if (ba != csv_body(slurp(b[i]))) ++byte_mismatch;
      worst_workers = std::max(worst_workers, body_difference(ba, csv_body(slurp(w[i]))));
    }
  }
  fs::remove_all(root);
  return {byte_mismatch == 0 && worst_workers <= 1e-12,
          std::to_string(kCommands.size()) + " subcommands, " + std::to_string(files) + " files; run-to-run body " +
              "mismatches " + std::to_string(byte_mismatch) + "; 1 vs 4 workers max relative difference " +
              g(worst_workers)};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "orthonormal polynomials of the two-point measure", orthonormal_polys},
    {2, "kappa bijection on [1..30]^2", kappa_bijection},
    {3, "characteristic function of a box increment", cf_match},
    {4, "mean and variance of compensated integrals", lemma_statistics},
    {5, "chaos orthogonality |alpha| <= 2, positions 1..6", chaos_orthogonality},
    {6, "pathwise product formula", product_formula},
    {7, "covariance partial sum at J = 400", covariance_convergence},
    {8, "white-noise reduction identity", reduction_identity},
    {9, "Hida-norm tail beyond J = 200 (q = 2)", hida_tails},
    {10, "Mittag-Leffler closed forms and overlap", mittag_leffler_checks},
    {11, "alpha = 1 Gaussian heat kernel limit", classical_limit},
    {12, "Ito isometry of I2 at alpha = 1", ito_isometry},
    {13, "centering for the tumor preset", tumor_centering},
    {14, "determinism across runs and workers", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--workers" && i + 1 < argc) {
      g_workers = static_cast<unsigned>(std::max(1, std::atoi(argv[++i])));
    } else {
      std::cerr << "usage: acceptance [--criterion N] [--workers W]\n";
      return 2;
    }
  }
  if (only < 0 || only > 14) {
    std::cerr << "criterion must be 1..14\n";
    return 2;
  }
  int failed = 0;
  for (const auto& c : kCriteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2d [%s] %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
