#ifndef HYPERLIM_CONFIG_HPP
#define HYPERLIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperlim/errors.hpp"
#include "hyperlim/harness.hpp"
#include "hyperlim/system.hpp"

namespace hyperlim {

/// Parsed and validated run configuration. The on-disk format is a flat
/// key = value file with [section] headers; keys are section-qualified
/// (e.g. "scheme.dt"). Unknown keys are rejected, and every offending key
/// is reported.
struct RunConfig {
  // [system]
  std::string system_name;                 // linear | burgers-shifted | chromatography
  std::vector<double> eigenvalues{0.3, 0.7};  // linear systems only
  std::optional<std::vector<double>> box_min;
  std::optional<std::vector<double>> box_max;
  std::optional<double> margin;

  // [scheme]
  std::string scheme_name;  // backward | semidiscrete
  long steps = 1;           // backward
  double t_final = 1.0;     // semidiscrete
  double dt = 0.05;

  // [grid] (backward)
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;

  // [window] (semidiscrete)
  long n_min = 0;
  long n_max = 0;

  // [initial]
  std::string initial_kind;  // riemann | spike | file
  std::vector<double> initial_left;
  std::vector<double> initial_right;
  double jump_position = 0.0;
  int ramp_cells = 0;
  double spike_mass = 1.0;
  double spike_width = 0.0;  // 0: default 10*dx (grid) or one cell (lattice)
  double spike_center = 0.0;
  std::string initial_file;

  // [limits]
  double tv_budget = 0.1;
  double escape_tol = 1e-8;

  // [diagnostics]
  std::vector<double> c0_scan{1.0, 5.0, 10.0, 50.0};
  double slack = 1e-4;
  int snapshot_stride = 1;

  // [study]
  std::vector<double> epsilons{0.04, 0.02, 0.01, 0.005};
  double t_physical = 1.0;
  int pair_count = 6;
  double pair_distance = 0.005;

  // [output]
  std::string output_directory = "out";

  // [random]
  std::uint64_t seed = 42;

  // Raw text the config was parsed from, echoed into the run manifest.
  std::string source_text;

  Scheme scheme() const;
  /// Instantiates the configured system (with box/margin overrides).
  SystemSpec make_system() const;
};

/// Parses and validates the documented key = value format. Throws
/// ConfigError listing every unknown key, out-of-range value and missing
/// required key with its section-qualified path.
RunConfig parse_config(const std::string& text);

/// Reads the file and delegates to parse_config.
RunConfig load_config(const std::string& path);

}  // namespace hyperlim

#endif  // HYPERLIM_CONFIG_HPP
