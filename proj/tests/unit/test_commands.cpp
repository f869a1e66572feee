#include "levy/commands.hpp"
#include "levy/config.hpp"

#include <doctest.h>
#include <stdexcept>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace levy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("LEVY_TEST_TMP");
  fs::path root = env && *env ? fs::path(env) : fs::temp_directory_path() / "levy_cli_test";
  fs::path dir = root / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.n_samples = 400;
  c.time_cells = 16;
  c.wn_J = {25, 50};
  c.sheet_paths = 3;
  c.brownian = true;
  return c;
}

std::vector<fs::path> run(const RunConfig& c, const fs::path& dir) {
  std::ostringstream log;
  return run_command(c, dir, log);
}

}  // namespace

TEST_CASE("every subcommand writes files whose header restores the config") {
  for (const auto& cmd : kCommands) {
    CAPTURE(cmd);
    const auto c = small(cmd);
    const auto dir = scratch("restore_" + cmd);
    const auto files = run(c, dir);
    REQUIRE_FALSE(files.empty());
    for (const auto& f : files) {
      CHECK(fs::exists(f));
      const auto text = slurp(f);
      CHECK(text.rfind("# levysheet " + cmd, 0) == 0);
      CHECK(parse_config(config_from_csv(text)) == c);
      CHECK_FALSE(csv_body(text).empty());
    }
  }
}

TEST_CASE("bodies are byte-identical across runs and worker counts") {
  for (const auto& cmd : kCommands) {
    CAPTURE(cmd);
    auto c = small(cmd);
    const auto a = run(c, scratch("det_a_" + cmd));
    const auto b = run(c, scratch("det_b_" + cmd));
    c.workers = 4;
    const auto w = run(c, scratch("det_w_" + cmd));
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == w.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(slurp(a[i]) == slurp(b[i]));
      CHECK(csv_body(slurp(a[i])) == csv_body(slurp(w[i])));
    }
  }
}

TEST_CASE("heat output carries the bias column and warnings") {
  auto c = small("solve-heat");
  c.alpha = 1.4;
  const auto files = run(c, scratch("heat_warn"));
  const auto text = slurp(files.front());
  CHECK(text.find("bias_estimate") != std::string::npos);
  CHECK(text.find("# warning:") != std::string::npos);
}

TEST_CASE("chaos-check matrix has standard-error columns") {
  const auto files = run(small("chaos-check"), scratch("chaos"));
  const auto body = csv_body(slurp(files.front()));
  CHECK(body.rfind("row,col,mean,std_error,expected,z_score", 0) == 0);
}

TEST_CASE("csv helpers") {
  const std::string text = "# a\n# config begin\n# [run]\n# seed = 5\n# config end\nx,y\n1,2\n";
  CHECK(config_from_csv(text) == "[run]\nseed = 5\n");
  CHECK(csv_body(text) == "x,y\n1,2\n");
}
