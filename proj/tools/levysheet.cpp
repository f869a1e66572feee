// levysheet: command-line front end for the Levy sheet / white noise library.
#include "levy/commands.hpp"
#include "levy/config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

struct Options {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string preset;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& command, const Options& opt) {
  levy::RunConfig base;
  if (!opt.preset.empty()) levy::apply_preset(base, opt.preset);
  levy::RunConfig config = opt.config_path.empty() ? base : levy::parse_config(read_file(opt.config_path), base);
  config.command = command;
  if (opt.seed) config.seed = *opt.seed;
  if (opt.workers) config.workers = *opt.workers;
  // Output directory precedence: --out, then LEVY_OUT_DIR, then run.out.
  if (opt.out) {
    config.out = *opt.out;
  } else if (const char* env = std::getenv("LEVY_OUT_DIR"); env && *env) {
    config.out = env;
  }
  levy::ensure_valid(config);
  for (const auto& path : levy::run_command(config, config.out, std::cerr)) std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy sheets, chaos expansions, white noise and the fractional stochastic heat equation"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "config file ([section] / key = value)")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "output directory (overrides LEVY_OUT_DIR and run.out)");
  app.add_option("--seed", opt.seed, "base seed");
  app.add_option("--workers", opt.workers, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--preset", opt.preset, "named preset applied before the config file")
      ->check(CLI::IsMember(levy::kPresets));

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate-sheet", "simulate Levy (and Brownian) sheet paths"},
      {"basis", "tabulate Hermite functions, orthonormal polynomials and the kappa pairing"},
      {"chaos-check", "Monte-Carlo orthogonality matrix of the chaos basis"},
      {"whitenoise", "white-noise coefficients, covariance convergence and Hida norm tails"},
      {"ml-eval", "evaluate the Mittag-Leffler function on a grid"},
      {"solve-heat", "Monte-Carlo solution of the fractional stochastic heat equation"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return run(app.get_subcommands().front()->get_name(), opt);
  } catch (const levy::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
