#include "levy/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace levy {

namespace {

using json = nlohmann::json;

[[noreturn]] void type_error(const char* expected) { throw std::invalid_argument(std::string("expected ") + expected); }

template <class T>
T extract(const json& v);

template <>
double extract<double>(const json& v) {
  if (!v.is_number()) type_error("a number");
  return v.get<double>();
}
template <>
int extract<int>(const json& v) {
  if (!v.is_number_integer()) type_error("an integer");
  const auto x = v.get<std::int64_t>();
  if (x < INT32_MIN || x > INT32_MAX) type_error("an integer in the int range");
  return static_cast<int>(x);
}
template <>
std::int64_t extract<std::int64_t>(const json& v) {
  if (!v.is_number_integer()) type_error("an integer");
  return v.get<std::int64_t>();
}
template <>
std::uint64_t extract<std::uint64_t>(const json& v) {
  if (!v.is_number_unsigned()) type_error("a non-negative integer");
  return v.get<std::uint64_t>();
}
template <>
unsigned extract<unsigned>(const json& v) {
  const auto x = extract<std::uint64_t>(v);
  if (x > UINT32_MAX) type_error("a non-negative 32-bit integer");
  return static_cast<unsigned>(x);
}
template <>
bool extract<bool>(const json& v) {
  if (!v.is_boolean()) type_error("true or false");
  return v.get<bool>();
}
template <>
std::string extract<std::string>(const json& v) {
  if (!v.is_string()) type_error("a string");
  return v.get<std::string>();
}
template <>
std::vector<double> extract<std::vector<double>>(const json& v) {
  if (!v.is_array()) type_error("a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(extract<double>(e));
  return out;
}
template <>
std::vector<std::uint64_t> extract<std::vector<std::uint64_t>>(const json& v) {
  if (!v.is_array()) type_error("a list of non-negative integers");
  std::vector<std::uint64_t> out;
  for (const auto& e : v) out.push_back(extract<std::uint64_t>(e));
  return out;
}
template <>
std::vector<std::vector<double>> extract<std::vector<std::vector<double>>>(const json& v) {
  if (!v.is_array()) type_error("a list of lists of numbers");
  std::vector<std::vector<double>> out;
  for (const auto& e : v) out.push_back(extract<std::vector<double>>(e));
  return out;
}
template <>
std::vector<std::array<double, 2>> extract<std::vector<std::array<double, 2>>>(const json& v) {
  if (!v.is_array()) type_error("a list of [z, weight] pairs");
  std::vector<std::array<double, 2>> out;
  for (const auto& e : v) {
    const auto pair = extract<std::vector<double>>(e);
    if (pair.size() != 2) type_error("[z, weight] pairs");
    out.push_back({pair[0], pair[1]});
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const json&)> set;
  std::function<json(const RunConfig&)> get;
};

template <class T>
Field field(std::string section, std::string key, T RunConfig::*member) {
  return {std::move(section), std::move(key), [member](RunConfig& c, const json& v) { c.*member = extract<T>(v); },
          [member](const RunConfig& c) { return json(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      field("run", "command", &RunConfig::command),
      field("run", "preset", &RunConfig::preset),
      field("run", "out", &RunConfig::out),
      field("run", "seed", &RunConfig::seed),
      field("run", "workers", &RunConfig::workers),
      field("run", "n_samples", &RunConfig::n_samples),
      field("measure", "kind", &RunConfig::measure_kind),
      field("measure", "atoms", &RunConfig::atoms),
      field("measure", "density", &RunConfig::density),
      field("measure", "scale", &RunConfig::density_scale),
      field("measure", "parameter", &RunConfig::density_parameter),
      field("measure", "inner", &RunConfig::density_inner),
      field("measure", "outer", &RunConfig::density_outer),
      field("measure", "sides", &RunConfig::density_sides),
      field("measure", "nodes_per_side", &RunConfig::nodes_per_side),
      field("sheet", "lower", &RunConfig::sheet_lower),
      field("sheet", "upper", &RunConfig::sheet_upper),
      field("sheet", "epsilon", &RunConfig::epsilon),
      field("sheet", "paths", &RunConfig::sheet_paths),
      field("sheet", "grid", &RunConfig::sheet_grid),
      field("sheet", "brownian", &RunConfig::brownian),
      field("sheet", "brownian_cells", &RunConfig::brownian_cells),
      field("basis", "dim", &RunConfig::basis_dim),
      field("basis", "count", &RunConfig::basis_count),
      field("basis", "poly_degree", &RunConfig::poly_degree),
      field("basis", "grid_lo", &RunConfig::grid_lo),
      field("basis", "grid_hi", &RunConfig::grid_hi),
      field("basis", "grid_points", &RunConfig::grid_points),
      field("chaos", "dim", &RunConfig::chaos_dim),
      field("chaos", "max_position", &RunConfig::max_position),
      field("chaos", "max_order", &RunConfig::max_order),
      field("chaos", "half_width", &RunConfig::half_width),
      field("whitenoise", "dim", &RunConfig::wn_dim),
      field("whitenoise", "x", &RunConfig::wn_x),
      field("whitenoise", "y", &RunConfig::wn_y),
      field("whitenoise", "z", &RunConfig::wn_z),
      field("whitenoise", "J", &RunConfig::wn_J),
      field("whitenoise", "J_prime", &RunConfig::J_prime),
      field("whitenoise", "q", &RunConfig::q),
      field("ml", "alpha", &RunConfig::ml_alpha),
      field("ml", "beta", &RunConfig::ml_beta),
      field("ml", "z_lo", &RunConfig::z_lo),
      field("ml", "z_hi", &RunConfig::z_hi),
      field("ml", "z_points", &RunConfig::z_points),
      field("ml", "regime", &RunConfig::regime),
      field("heat", "alpha", &RunConfig::alpha),
      field("heat", "lambda", &RunConfig::lambda),
      field("heat", "sigma", &RunConfig::sigma),
      field("heat", "gamma", &RunConfig::gamma),
      field("heat", "d", &RunConfig::d),
      field("heat", "t", &RunConfig::t),
      field("heat", "points", &RunConfig::points),
      field("heat", "x_max", &RunConfig::x_max),
      field("heat", "time_cells", &RunConfig::time_cells),
      field("heat", "time_grading", &RunConfig::time_grading),
      field("heat", "space_step", &RunConfig::space_step),
      field("heat", "time_nodes", &RunConfig::time_nodes),
  };
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a '#' comment that is not inside a string literal.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_value(const std::string& text, json& out) {
  static const std::regex bare("[A-Za-z_.][A-Za-z0-9_./+-]*");
  if (text == "true" || text == "false" || text == "null") {
    out = json::parse(text);
    return !out.is_null();
  }
  if (std::regex_match(text, bare)) {
    out = text;
    return true;
  }
  out = json::parse(text, nullptr, false);
  return !out.is_discarded();
}

bool in(const std::string& value, const std::vector<std::string>& options) {
  return std::find(options.begin(), options.end(), value) != options.end();
}

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

const std::vector<std::string> kCommands = {"simulate-sheet", "basis", "chaos-check", "whitenoise", "ml-eval", "solve-heat"};
const std::vector<std::string> kPresets = {"tumor"};

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::shared_ptr<const LevyMeasure> RunConfig::build_measure() const {
  if (measure_kind == "atoms") {
    std::vector<Atom> list;
    for (const auto& a : atoms) list.push_back({a[0], a[1]});
    return std::make_shared<const LevyMeasure>(LevyMeasure::from_atoms(std::move(list)));
  }
  if (measure_kind == "density") {
    const DensitySides s = density_sides == "negative"   ? DensitySides::negative
                           : density_sides == "positive" ? DensitySides::positive
                                                         : DensitySides::both;
    return std::make_shared<const LevyMeasure>(LevyMeasure::from_density(
        density, named_density(density, density_scale, density_parameter), density_inner, density_outer, s,
        nodes_per_side));
  }
  throw std::invalid_argument("measure.kind must be atoms or density");
}

void apply_preset(RunConfig& c, const std::string& name) {
  if (name != "tumor") throw std::invalid_argument("unknown preset '" + name + "' (available: tumor)");
  // Subdiffusive spread with rare large growth jumps and frequent small losses.
  c.preset = name;
  c.measure_kind = "atoms";
  c.atoms = {{-0.5, 1.0}, {1.5, 0.4}};
  c.alpha = 0.7;
  c.lambda = 0.2;
  c.sigma = 0.3;
  c.gamma = 0.5;
  c.d = 1;
  c.t = 1.0;
  c.points = {{-1.0}, {-0.5}, {0.0}, {0.5}, {1.0}};
  c.n_samples = 10000;
}

RunConfig parse_config(const std::string& text) { return parse_config(text, RunConfig{}); }

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::vector<std::string> errors;
  struct Entry {
    const Field* field;
    json value;
    std::string path;
  };
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in_stream(text);
  std::string raw;
  int line_no = 0;
  static const std::regex section_re(R"(\[\s*([A-Za-z_-]+)\s*\])");
  static const std::regex key_re(R"(([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*))");
  while (std::getline(in_stream, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::smatch m;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (std::regex_match(line, m, section_re)) {
      section = m[1];
      static const std::set<std::string> sections = {"run", "measure", "sheet", "basis", "chaos", "whitenoise", "ml", "heat"};
      if (!sections.count(section)) errors.push_back(where + "unknown section [" + section + "]");
      continue;
    }
    if (!std::regex_match(line, m, key_re)) {
      errors.push_back(where + "syntax error, expected '[section]' or 'key = value'");
      continue;
    }
    const std::string key = m[1];
    const std::string value_text = trim(m[2]);
    if (section.empty()) {
      errors.push_back(where + "key '" + key + "' appears before any [section]");
      continue;
    }
    const std::string path = section + "." + key;
    const Field* f = find_field(section, key);
    if (!f) {
      errors.push_back(where + "unknown key " + path);
      continue;
    }
    if (!seen.insert(path).second) {
      errors.push_back(where + "duplicate key " + path);
      continue;
    }
    json value;
    if (value_text.empty() || !parse_value(value_text, value)) {
      errors.push_back(where + "syntax error in value of " + path);
      continue;
    }
    entries.push_back({f, std::move(value), path});
  }

  RunConfig config = std::move(base);
  for (const auto& e : entries) {
    if (e.path != "run.preset") continue;
    try {
      const auto name = extract<std::string>(e.value);
      if (!name.empty()) apply_preset(config, name);
    } catch (const std::exception& ex) {
      errors.push_back(e.path + ": " + ex.what());
    }
  }
  for (const auto& e : entries) {
    try {
      e.field->set(config, e.value);
    } catch (const std::exception& ex) {
      errors.push_back(e.path + ": " + ex.what());
    }
  }
  for (auto& v : validate_config(config)) errors.push_back(std::move(v));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return config;
}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> e;
  auto check = [&e](bool ok, const std::string& msg) {
    if (!ok) e.push_back(msg);
  };

  check(c.command.empty() || in(c.command, kCommands), "run.command: unknown subcommand '" + c.command + "'");
  check(c.preset.empty() || in(c.preset, kPresets), "run.preset: unknown preset '" + c.preset + "'");
  check(!c.out.empty(), "run.out: must not be empty");
  check(c.workers >= 1 && c.workers <= 256, "run.workers: must lie in [1, 256]");
  check(c.n_samples >= 2, "run.n_samples: must be >= 2");

  if (c.measure_kind == "atoms") {
    check(!c.atoms.empty(), "measure.atoms: at least one atom is required");
    for (const auto& a : c.atoms) {
      if (!std::isfinite(a[0]) || !std::isfinite(a[1])) {
        e.push_back("measure.atoms: entries must be finite");
      } else if (a[0] == 0.0) {
        e.push_back("measure.atoms: atom at z=0 forbidden");
      } else if (!(a[1] > 0.0)) {
        e.push_back("measure.atoms: weights must be > 0");
      }
    }
  } else if (c.measure_kind == "density") {
    check(in(c.density, {"uniform", "power", "exponential"}), "measure.density: expected uniform, power or exponential");
    check(in(c.density_sides, {"both", "negative", "positive"}), "measure.sides: expected both, negative or positive");
    check(c.density_inner > 0.0 && c.density_outer > c.density_inner && std::isfinite(c.density_outer),
          "measure.inner/outer: need 0 < inner < outer < infinity (finite activity, compact support)");
    check(c.density_scale > 0.0, "measure.scale: must be > 0");
    check(c.nodes_per_side >= 1 && c.nodes_per_side <= 4096, "measure.nodes_per_side: must lie in [1, 4096]");
    check(c.density != "exponential" || c.density_parameter > 0.0, "measure.parameter: exponential rate must be > 0");
  } else {
    e.push_back("measure.kind: expected atoms or density");
  }

  check(!c.sheet_lower.empty() && c.sheet_lower.size() <= 3, "sheet.lower: dimension must lie in [1, 3]");
  check(c.sheet_lower.size() == c.sheet_upper.size(), "sheet.upper: must have the same length as sheet.lower");
  if (c.sheet_lower.size() == c.sheet_upper.size() && finite_all(c.sheet_lower) && finite_all(c.sheet_upper)) {
    for (std::size_t l = 0; l < c.sheet_lower.size(); ++l) {
      check(c.sheet_lower[l] < c.sheet_upper[l], "sheet.upper: each upper bound must exceed the lower bound");
      check(c.sheet_lower[l] <= 0.0, "sheet.lower: the sheet is anchored at 0, lower bounds must be <= 0");
    }
  } else {
    e.push_back("sheet.lower/upper: bounds must be finite");
  }
  check(c.epsilon >= 0.0 && std::isfinite(c.epsilon), "sheet.epsilon: must be >= 0");
  check(c.sheet_paths >= 1, "sheet.paths: must be >= 1");
  check(c.sheet_grid >= 2 && c.sheet_grid <= 1001, "sheet.grid: must lie in [2, 1001]");
  check(c.brownian_cells >= 1 && c.brownian_cells <= 1000, "sheet.brownian_cells: must lie in [1, 1000]");

  check(c.basis_dim >= 1 && c.basis_dim <= 3, "basis.dim: must lie in [1, 3]");
  check(c.basis_count >= 1 && c.basis_count <= 10000, "basis.count: must lie in [1, 10000]");
  check(c.poly_degree >= 1 && c.poly_degree <= 5, "basis.poly_degree: must lie in [1, 5]");
  check(c.grid_lo < c.grid_hi, "basis.grid_hi: must exceed grid_lo");
  check(c.grid_points >= 1 && c.grid_points <= 10001, "basis.grid_points: must lie in [1, 10001]");

  check(c.chaos_dim >= 1 && c.chaos_dim <= 2, "chaos.dim: must be 1 or 2");
  check(c.max_position >= 1 && c.max_position <= 36, "chaos.max_position: must lie in [1, 36]");
  check(c.max_order >= 1 && c.max_order <= 3, "chaos.max_order: must lie in [1, 3]");
  check(c.half_width > 0.0 && c.half_width <= 20.0, "chaos.half_width: must lie in (0, 20]");

  check(c.wn_dim >= 1 && c.wn_dim <= 2, "whitenoise.dim: must be 1 or 2");
  check(c.wn_x.size() == static_cast<std::size_t>(c.wn_dim), "whitenoise.x: length must equal whitenoise.dim");
  check(c.wn_y.size() == static_cast<std::size_t>(c.wn_dim), "whitenoise.y: length must equal whitenoise.dim");
  check(finite_all(c.wn_x) && finite_all(c.wn_y), "whitenoise.x/y: must be finite");
  check(c.wn_z != 0.0 && std::isfinite(c.wn_z), "whitenoise.z: must be finite and nonzero");
  check(!c.wn_J.empty() && std::is_sorted(c.wn_J.begin(), c.wn_J.end()) && c.wn_J.front() >= 1 && c.wn_J.back() <= 20000,
        "whitenoise.J: must be an increasing list in [1, 20000]");
  check(c.J_prime >= 1 && c.J_prime <= 6, "whitenoise.J_prime: must lie in [1, 6]");
  check(c.q >= 0 && c.q <= 16, "whitenoise.q: must lie in [0, 16]");

  check(c.ml_alpha > 0.0 && c.ml_alpha <= 2.0, "ml.alpha: must lie in (0, 2]");
  check(c.ml_beta > 0.0, "ml.beta: must be > 0");
  check(std::isfinite(c.z_lo) && std::isfinite(c.z_hi) && c.z_lo <= c.z_hi, "ml.z_lo/z_hi: need finite z_lo <= z_hi");
  check(c.z_points >= 1 && c.z_points <= 100001, "ml.z_points: must lie in [1, 100001]");
  check(in(c.regime, {"automatic", "series", "series_quad", "asymptotic", "laplace"}),
        "ml.regime: expected automatic, series, series_quad, asymptotic or laplace");

  check(c.alpha > 0.0 && c.alpha < 2.0, "heat.alpha: Caputo order must lie in (0, 2)");
  check(c.lambda > 0.0, "heat.lambda: must be > 0");
  check(std::isfinite(c.sigma) && std::isfinite(c.gamma), "heat.sigma/gamma: must be finite");
  check(c.d == 1 || c.d == 2, "heat.d: must be 1 or 2 (d >= 3 is not supported)");
  check(c.t > 0.0 && std::isfinite(c.t), "heat.t: must be > 0");
  check(!c.points.empty(), "heat.points: at least one point is required");
  for (const auto& p : c.points) {
    if (p.size() != static_cast<std::size_t>(c.d) || !finite_all(p)) {
      e.push_back("heat.points: every point must have d finite coordinates");
      break;
    }
  }
  check(c.x_max >= 0.0, "heat.x_max: must be >= 0 (0 selects the default)");
  check(c.space_step >= 0.0, "heat.space_step: must be >= 0 (0 selects the default)");
  check(c.time_cells >= 1 && c.time_cells <= 4096, "heat.time_cells: must lie in [1, 4096]");
  check(c.time_grading >= 1.0 && c.time_grading <= 8.0, "heat.time_grading: must lie in [1, 8]");
  check(c.time_nodes >= 1 && c.time_nodes <= 64, "heat.time_nodes: must lie in [1, 64]");
  return e;
}

void ensure_valid(const RunConfig& config) {
  auto errors = validate_config(config);
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::string to_text(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config).dump() + "\n";
  }
  return out;
}

}  // namespace levy
