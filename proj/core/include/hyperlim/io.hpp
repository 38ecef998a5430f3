#ifndef HYPERLIM_IO_HPP
#define HYPERLIM_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "hyperlim/functionals.hpp"
#include "hyperlim/state.hpp"

namespace hyperlim {

/// Metadata carried in the comment header of profile/lattice CSV files.
struct ProfileMeta {
  std::string system;
  long step = 0;
  double time = 0.0;
};

/// Writes a grid profile as CSV: a `# key=value` metadata line (grid
/// origin, spacing, step, system name, left state) followed by a column
/// header `x,u_1..u_n` and one row per node. Values use 17 significant
/// digits so round-trips are bitwise lossless.
void write_profile(const std::string& path, const GridFunction& g,
                   const ProfileMeta& meta);

/// Reads a profile written by write_profile. Throws IoError with the
/// offending 1-based line number on malformed input; an empty file fails at
/// line 1. A metadata system name differing from `expected_system` is
/// reported through `warning` (when given), never an error.
GridFunction read_profile(const std::string& path, ProfileMeta* meta = nullptr,
                          const std::string& expected_system = "",
                          std::string* warning = nullptr);

/// Lattice snapshot CSV: metadata line (n_min, time, system name, left
/// state), column header `n,u_1..u_n`, one row per cell.
void write_lattice(const std::string& path, const LatticeState& s,
                   const ProfileMeta& meta);
LatticeState read_lattice(const std::string& path, ProfileMeta* meta = nullptr,
                          const std::string& expected_system = "",
                          std::string* warning = nullptr);

/// Per-step diagnostics CSV with columns
/// step,tv,q,lyapunov,c0,source_magnitude.
void write_reports_csv(const std::string& path,
                       const std::vector<FunctionalReport>& reports);

/// Formats a double with 17 significant digits (lossless round-trip).
std::string format_full(double v);

}  // namespace hyperlim

#endif  // HYPERLIM_IO_HPP
