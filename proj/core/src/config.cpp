#include "hyperlim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hyperlim {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// Raw key/value store with collected validation issues.
struct RawConfig {
  std::map<std::string, std::string> entries;
  std::vector<std::string> issues;
  std::set<std::string> consumed;

  bool has(const std::string& key) const { return entries.count(key) > 0; }

  std::string take(const std::string& key) {
    consumed.insert(key);
    auto it = entries.find(key);
    return it == entries.end() ? std::string() : it->second;
  }

  void complain(const std::string& msg) { issues.push_back(msg); }

  std::string get_string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    std::string v = take(key);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
      v = v.substr(1, v.size() - 2);
    return v;
  }

  std::optional<double> parse_double(const std::string& key,
                                     const std::string& text) {
    const std::string t = trim(text);
    double v = 0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || p != end) {
      complain(key + ": not a number: '" + t + "'");
      return std::nullopt;
    }
    return v;
  }

  double get_double(const std::string& key, double def, double lo, double hi) {
    if (!has(key)) return def;
    auto v = parse_double(key, take(key));
    if (!v) return def;
    if (*v < lo || *v > hi) {
      std::ostringstream os;
      os << key << ": value " << *v << " outside [" << lo << ", " << hi << "]";
      complain(os.str());
      return def;
    }
    return *v;
  }

  long get_long(const std::string& key, long def, long lo, long hi) {
    if (!has(key)) return def;
    const std::string t = trim(take(key));
    long v = 0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || p != end) {
      complain(key + ": not an integer: '" + t + "'");
      return def;
    }
    if (v < lo || v > hi) {
      std::ostringstream os;
      os << key << ": value " << v << " outside [" << lo << ", " << hi << "]";
      complain(os.str());
      return def;
    }
    return v;
  }

  std::uint64_t get_seed(const std::string& key, std::uint64_t def) {
    if (!has(key)) return def;
    const std::string t = trim(take(key));
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) {
      complain(key + ": not an unsigned integer: '" + t + "'");
      return def;
    }
    return v;
  }

  std::vector<double> get_list(const std::string& key,
                               std::vector<double> def) {
    if (!has(key)) return def;
    std::string raw = get_string(key, "");
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto v = parse_double(key, item);
      if (!v) return def;
      out.push_back(*v);
    }
    if (out.empty()) {
      complain(key + ": empty list");
      return def;
    }
    return out;
  }
};

RawConfig tokenize(const std::string& text, std::vector<std::string>& issues) {
  RawConfig raw;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  long line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back("line " + std::to_string(line_no) +
                         ": malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(line_no) +
                       ": expected key = value, got '" + line + "'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!section.empty()) key = section + "." + key;
    if (raw.entries.count(key)) {
      issues.push_back(key + ": duplicate key");
      continue;
    }
    raw.entries[key] = value;
  }
  return raw;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "system.name",          "system.eigenvalues",
      "system.box_min",       "system.box_max",
      "system.margin",        "scheme.name",
      "scheme.steps",         "scheme.t_final",
      "scheme.dt",            "grid.x_min",
      "grid.x_max",           "grid.dx",
      "window.n_min",         "window.n_max",
      "initial.kind",         "initial.left",
      "initial.right",        "initial.jump_position",
      "initial.ramp_cells",   "initial.spike_mass",
      "initial.spike_width",  "initial.spike_center",
      "initial.file",         "limits.tv_budget",
      "limits.escape_tol",    "diagnostics.c0_scan",
      "diagnostics.slack",    "diagnostics.snapshot_stride",
      "study.epsilons",       "study.t_physical",
      "study.pair_count",     "study.pair_distance",
      "output.directory",     "random.seed"};
  return keys;
}

}  // namespace

Scheme RunConfig::scheme() const {
  return scheme_name == "backward" ? Scheme::backward : Scheme::semidiscrete;
}

SystemSpec RunConfig::make_system() const {
  std::optional<Box> box;
  if (box_min && box_max) box = Box{*box_min, *box_max};
  const Box* box_ptr = box ? &*box : nullptr;
  if (system_name == "linear")
    return make_linear_system(eigenvalues, box_ptr, margin.value_or(0.1));
  if (system_name == "burgers-shifted")
    return make_shifted_burgers(box_ptr, margin.value_or(0.05));
  if (system_name == "chromatography")
    return make_chromatography(box_ptr, margin.value_or(0.05));
  throw ConfigError({"system.name: unknown system '" + system_name + "'"});
}

RunConfig parse_config(const std::string& text) {
  std::vector<std::string> issues;
  RawConfig raw = tokenize(text, issues);
  raw.issues = std::move(issues);

  for (const auto& [key, value] : raw.entries)
    if (!known_keys().count(key)) raw.complain(key + ": unknown key");

  RunConfig cfg;
  cfg.source_text = text;

  cfg.system_name = raw.get_string("system.name", "");
  if (cfg.system_name.empty())
    raw.complain("system.name: missing required key");
  else if (cfg.system_name != "linear" && cfg.system_name != "burgers-shifted" &&
           cfg.system_name != "chromatography")
    raw.complain("system.name: unknown system '" + cfg.system_name + "'");

  cfg.eigenvalues = raw.get_list("system.eigenvalues", cfg.eigenvalues);
  for (double l : cfg.eigenvalues)
    if (l <= 0.0 || l >= 1.0) {
      raw.complain("system.eigenvalues: speeds must lie strictly in (0, 1)");
      break;
    }
  if (raw.has("system.box_min")) cfg.box_min = raw.get_list("system.box_min", {});
  if (raw.has("system.box_max")) cfg.box_max = raw.get_list("system.box_max", {});
  if (cfg.box_min.has_value() != cfg.box_max.has_value())
    raw.complain("system.box_min/box_max: both or neither must be given");
  if (cfg.box_min && cfg.box_max) {
    if (cfg.box_min->size() != cfg.box_max->size())
      raw.complain("system.box_min/box_max: lengths differ");
    else
      for (size_t k = 0; k < cfg.box_min->size(); ++k)
        if (!((*cfg.box_min)[k] < (*cfg.box_max)[k])) {
          raw.complain("system.box_min/box_max: box_min must be below box_max");
          break;
        }
  }
  if (raw.has("system.margin"))
    cfg.margin = raw.get_double("system.margin", 0.05, 1e-12, 1e6);

  cfg.scheme_name = raw.get_string("scheme.name", "");
  if (cfg.scheme_name.empty())
    raw.complain("scheme.name: missing required key");
  else if (cfg.scheme_name != "backward" && cfg.scheme_name != "semidiscrete")
    raw.complain("scheme.name: must be 'backward' or 'semidiscrete'");

  cfg.dt = raw.get_double("scheme.dt", 0.05, 1e-12, 0.5);
  cfg.steps = raw.get_long("scheme.steps", 1, 1, 100000000L);
  cfg.t_final = raw.get_double("scheme.t_final", 1.0, 0.0, 1e12);

  if (cfg.scheme_name == "backward") {
    for (const char* key : {"grid.x_min", "grid.x_max", "grid.dx"})
      if (!raw.has(key)) raw.complain(std::string(key) + ": missing required key");
    if (!raw.has("scheme.steps"))
      raw.complain("scheme.steps: missing required key");
    cfg.x_min = raw.get_double("grid.x_min", 0.0, -1e12, 1e12);
    cfg.x_max = raw.get_double("grid.x_max", 0.0, -1e12, 1e12);
    cfg.dx = raw.get_double("grid.dx", 0.0, 1e-12, 1e12);
    if (raw.has("grid.x_min") && raw.has("grid.x_max") &&
        !(cfg.x_max > cfg.x_min))
      raw.complain("grid.x_max: must exceed grid.x_min");
  } else if (cfg.scheme_name == "semidiscrete") {
    for (const char* key : {"window.n_min", "window.n_max"})
      if (!raw.has(key)) raw.complain(std::string(key) + ": missing required key");
    if (!raw.has("scheme.t_final"))
      raw.complain("scheme.t_final: missing required key");
    cfg.n_min = raw.get_long("window.n_min", 0, -1000000000L, 1000000000L);
    cfg.n_max = raw.get_long("window.n_max", 0, -1000000000L, 1000000000L);
    if (raw.has("window.n_min") && raw.has("window.n_max") &&
        !(cfg.n_max > cfg.n_min))
      raw.complain("window.n_max: must exceed window.n_min");
  }

  cfg.initial_kind = raw.get_string("initial.kind", "");
  if (cfg.initial_kind.empty())
    raw.complain("initial.kind: missing required key");
  else if (cfg.initial_kind != "riemann" && cfg.initial_kind != "spike" &&
           cfg.initial_kind != "file")
    raw.complain("initial.kind: must be 'riemann', 'spike' or 'file'");

  if (cfg.initial_kind == "riemann") {
    if (!raw.has("initial.left"))
      raw.complain("initial.left: missing required key");
    if (!raw.has("initial.right"))
      raw.complain("initial.right: missing required key");
  }
  if (cfg.initial_kind == "file" && !raw.has("initial.file"))
    raw.complain("initial.file: missing required key");

  cfg.initial_left = raw.get_list("initial.left", {});
  cfg.initial_right = raw.get_list("initial.right", {});
  cfg.jump_position = raw.get_double("initial.jump_position", 0.0, -1e12, 1e12);
  cfg.ramp_cells =
      static_cast<int>(raw.get_long("initial.ramp_cells", 0, 0, 1000000));
  cfg.spike_mass = raw.get_double("initial.spike_mass", 1.0, -1e12, 1e12);
  cfg.spike_width = raw.get_double("initial.spike_width", 0.0, 0.0, 1e12);
  cfg.spike_center = raw.get_double("initial.spike_center", 0.0, -1e12, 1e12);
  cfg.initial_file = raw.get_string("initial.file", "");

  cfg.tv_budget = raw.get_double("limits.tv_budget", 0.1, 1e-12, 1e12);
  cfg.escape_tol = raw.get_double("limits.escape_tol", 1e-8, 0.0, 1e300);

  cfg.c0_scan = raw.get_list("diagnostics.c0_scan", cfg.c0_scan);
  for (double c : cfg.c0_scan)
    if (c <= 0) {
      raw.complain("diagnostics.c0_scan: entries must be positive");
      break;
    }
  cfg.slack = raw.get_double("diagnostics.slack", 1e-4, 0.0, 1e6);
  cfg.snapshot_stride = static_cast<int>(
      raw.get_long("diagnostics.snapshot_stride", 1, 1, 1000000000L));

  cfg.epsilons = raw.get_list("study.epsilons", cfg.epsilons);
  for (size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (cfg.epsilons[i] <= 0) {
      raw.complain("study.epsilons: entries must be positive");
      break;
    }
    if (i > 0 && cfg.epsilons[i] >= cfg.epsilons[i - 1]) {
      raw.complain("study.epsilons: must be strictly decreasing");
      break;
    }
  }
  cfg.t_physical = raw.get_double("study.t_physical", 1.0, 1e-12, 1e12);
  cfg.pair_count =
      static_cast<int>(raw.get_long("study.pair_count", 6, 1, 10000));
  cfg.pair_distance = raw.get_double("study.pair_distance", 0.005, 1e-12, 0.01);

  cfg.output_directory = raw.get_string("output.directory", "out");
  cfg.seed = raw.get_seed("random.seed", 42);

  // dimension-dependent cross checks
  int dim = 0;
  if (cfg.system_name == "linear")
    dim = static_cast<int>(cfg.eigenvalues.size());
  else if (cfg.system_name == "burgers-shifted")
    dim = 1;
  else if (cfg.system_name == "chromatography")
    dim = 2;
  if (dim > 0) {
    if (cfg.box_min && static_cast<int>(cfg.box_min->size()) != dim)
      raw.complain("system.box_min: expected " + std::to_string(dim) +
                   " components");
    if (cfg.initial_kind == "riemann" && raw.has("initial.left") &&
        static_cast<int>(cfg.initial_left.size()) != dim)
      raw.complain("initial.left: expected " + std::to_string(dim) +
                   " components");
    if (cfg.initial_kind == "riemann" && raw.has("initial.right") &&
        static_cast<int>(cfg.initial_right.size()) != dim)
      raw.complain("initial.right: expected " + std::to_string(dim) +
                   " components");
  }

  if (!raw.issues.empty()) throw ConfigError(raw.issues);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace hyperlim
