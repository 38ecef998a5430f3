#include "hyperlim/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "hyperlim/errors.hpp"

namespace hyperlim {

namespace {

constexpr const char* kProfileTag = "# hyperlim-profile";
constexpr const char* kLatticeTag = "# hyperlim-lattice";

std::string join_state(const Vec& v) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) out += ';';
    out += format_full(v[k]);
  }
  return out;
}

Vec split_state(const std::string& text, long line) {
  Vec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw IoError("bad state component '" + item + "'", line);
    }
  }
  return out;
}

/// key=value tokens after the tag.
std::map<std::string, std::string> parse_meta_line(const std::string& line,
                                                   const char* tag) {
  if (line.rfind(tag, 0) != 0)
    throw IoError(std::string("missing '") + tag + "' header", 1);
  std::map<std::string, std::string> kv;
  std::stringstream ss(line.substr(std::strlen(tag)));
  std::string tok;
  while (ss >> tok) {
    const size_t eq = tok.find('=');
    if (eq == std::string::npos) throw IoError("malformed metadata token", 1);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

double meta_double(const std::map<std::string, std::string>& kv,
                   const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw IoError("metadata missing '" + key + "'", 1);
  try {
    return std::stod(it->second);
  } catch (...) {
    throw IoError("metadata '" + key + "' not a number", 1);
  }
}

long meta_long(const std::map<std::string, std::string>& kv,
               const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw IoError("metadata missing '" + key + "'", 1);
  try {
    return std::stol(it->second);
  } catch (...) {
    throw IoError("metadata '" + key + "' not an integer", 1);
  }
}

std::vector<double> parse_row(const std::string& line, size_t expected,
                              long line_no) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      row.push_back(std::stod(item));
    } catch (...) {
      throw IoError("bad numeric field '" + item + "'", line_no);
    }
  }
  if (row.size() != expected)
    throw IoError("expected " + std::to_string(expected) + " columns, got " +
                      std::to_string(row.size()),
                  line_no);
  return row;
}

void check_system_name(const std::map<std::string, std::string>& kv,
                       const std::string& expected, std::string* warning) {
  auto it = kv.find("system");
  if (it == kv.end() || expected.empty()) return;
  if (it->second != expected && warning)
    *warning = "file written for system '" + it->second +
               "', configured system is '" + expected + "'";
}

}  // namespace

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_profile(const std::string& path, const GridFunction& g,
                   const ProfileMeta& meta) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << kProfileTag << " system=" << meta.system << " step=" << meta.step
      << " time=" << format_full(meta.time)
      << " x_min=" << format_full(g.x_min) << " dx=" << format_full(g.dx)
      << " dim=" << g.dim << " left_state=" << join_state(g.left_state)
      << "\n";
  out << "x";
  for (int k = 1; k <= g.dim; ++k) out << ",u_" << k;
  out << "\n";
  for (int j = 0; j < g.size(); ++j) {
    out << format_full(g.x(j));
    for (int k = 0; k < g.dim; ++k) out << ',' << format_full(g.at(j)[k]);
    out << "\n";
  }
}

GridFunction read_profile(const std::string& path, ProfileMeta* meta,
                          const std::string& expected_system,
                          std::string* warning) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path, 1);
  std::string line;
  if (!std::getline(in, line) || line.empty())
    throw IoError("empty file", 1);
  const auto kv = parse_meta_line(line, kProfileTag);
  check_system_name(kv, expected_system, warning);

  GridFunction g;
  g.x_min = meta_double(kv, "x_min");
  g.dx = meta_double(kv, "dx");
  g.dim = static_cast<int>(meta_long(kv, "dim"));
  if (g.dim < 1) throw IoError("metadata dim must be positive", 1);
  g.left_state = split_state(kv.at("left_state"), 1);
  if (static_cast<int>(g.left_state.size()) != g.dim)
    throw IoError("left_state length does not match dim", 1);
  if (meta) {
    meta->system = kv.count("system") ? kv.at("system") : "";
    meta->step = meta_long(kv, "step");
    meta->time = meta_double(kv, "time");
  }

  long line_no = 1;
  if (!std::getline(in, line))
    throw IoError("missing column header", 2);
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto row = parse_row(line, static_cast<size_t>(g.dim) + 1, line_no);
    for (int k = 0; k < g.dim; ++k) g.values.push_back(row[k + 1]);
  }
  if (g.values.empty()) throw IoError("no data rows", line_no + 1);
  return g;
}

void write_lattice(const std::string& path, const LatticeState& s,
                   const ProfileMeta& meta) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << kLatticeTag << " system=" << meta.system << " step=" << meta.step
      << " time=" << format_full(s.time) << " n_min=" << s.n_min
      << " dim=" << s.dim << " left_state=" << join_state(s.left_state)
      << "\n";
  out << "n";
  for (int k = 1; k <= s.dim; ++k) out << ",u_" << k;
  out << "\n";
  for (int k = 0; k < s.size(); ++k) {
    out << (s.n_min + k);
    for (int c = 0; c < s.dim; ++c) out << ',' << format_full(s.at(k)[c]);
    out << "\n";
  }
}

LatticeState read_lattice(const std::string& path, ProfileMeta* meta,
                          const std::string& expected_system,
                          std::string* warning) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path, 1);
  std::string line;
  if (!std::getline(in, line) || line.empty())
    throw IoError("empty file", 1);
  const auto kv = parse_meta_line(line, kLatticeTag);
  check_system_name(kv, expected_system, warning);

  LatticeState s;
  s.n_min = meta_long(kv, "n_min");
  s.time = meta_double(kv, "time");
  s.dim = static_cast<int>(meta_long(kv, "dim"));
  if (s.dim < 1) throw IoError("metadata dim must be positive", 1);
  s.left_state = split_state(kv.at("left_state"), 1);
  if (static_cast<int>(s.left_state.size()) != s.dim)
    throw IoError("left_state length does not match dim", 1);
  if (meta) {
    meta->system = kv.count("system") ? kv.at("system") : "";
    meta->step = meta_long(kv, "step");
    meta->time = s.time;
  }

  long line_no = 1;
  if (!std::getline(in, line)) throw IoError("missing column header", 2);
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto row = parse_row(line, static_cast<size_t>(s.dim) + 1, line_no);
    for (int c = 0; c < s.dim; ++c) s.cells.push_back(row[c + 1]);
  }
  if (s.cells.empty()) throw IoError("no data rows", line_no + 1);
  return s;
}

void write_reports_csv(const std::string& path,
                       const std::vector<FunctionalReport>& reports) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "step,tv,q,lyapunov,c0,source_magnitude\n";
  for (const auto& r : reports) {
    out << r.step << ',' << format_full(r.total_variation) << ','
        << format_full(r.interaction_potential) << ','
        << format_full(r.lyapunov) << ',' << format_full(r.c0) << ','
        << format_full(r.source_magnitude) << "\n";
  }
}

}  // namespace hyperlim
