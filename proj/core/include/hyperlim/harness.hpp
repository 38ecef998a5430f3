#ifndef HYPERLIM_HARNESS_HPP
#define HYPERLIM_HARNESS_HPP

#include <random>
#include <string>
#include <vector>

#include "hyperlim/backward.hpp"
#include "hyperlim/semidiscrete.hpp"
#include "hyperlim/state.hpp"
#include "hyperlim/system.hpp"

namespace hyperlim {

enum class Scheme { backward, semidiscrete };

std::string scheme_name(Scheme s);

/// Two-state initial data for the Cauchy problem.
struct RiemannProblem {
  Vec left;
  Vec right;
};

/// A profile in physical coordinates: piecewise-constant cells centered at
/// the sample points xs (uniform spacing).
struct PhysicalProfile {
  std::vector<double> xs;
  std::vector<double> values;  ///< node-major, dim components per node
  int dim = 1;
  double spacing() const { return xs.size() > 1 ? xs[1] - xs[0] : 0.0; }
};

/// Maps a rescaled grid profile or lattice window back to physical
/// coordinates x_phys = epsilon * x (cells of width epsilon*dx resp.
/// epsilon).
PhysicalProfile to_physical(const GridFunction& g, double epsilon);
PhysicalProfile to_physical(const LatticeState& s, double epsilon);

/// L1 distance of two physical profiles after piecewise-constant
/// resampling to a common fine grid over the overlap of their domains.
double l1_distance(const PhysicalProfile& a, const PhysicalProfile& b);

/// Exact entropy solution of a scalar Riemann problem with convex flux at
/// time t, sampled on the given uniform grid: a shock at the chord speed
/// when u_l > u_r, the centered fan when u_l < u_r. Linear (degenerate
/// convex) fluxes translate the jump at the constant speed. Throws
/// DomainError for genuinely nonconvex fluxes.
GridFunction exact_scalar_riemann(const SystemSpec& system,
                                  const RiemannProblem& problem, double t,
                                  double x_min, double dx, int nodes);

/// Convergence study record: per epsilon the L1 distance to the reference
/// in physical coordinates and the wall time of the run.
struct ConvergenceRecord {
  struct Entry {
    double epsilon = 0.0;
    double l1_error = 0.0;
    double runtime_seconds = 0.0;
  };
  std::vector<Entry> entries;
  bool has_order = false;
  double fitted_order = 0.0;  ///< least-squares slope of log err vs log eps

  void fit_order();
};

struct StudyOptions {
  double t_physical = 1.0;
  double dx_rescaled = 0.05;  ///< backward grid spacing in rescaled units
  double dt = 0.05;           ///< semidiscrete RK4 step in rescaled units
  double tv_budget = 1.0;     ///< Riemann data may exceed the default budget
  double escape_tol = 1e-8;
  int ramp_cells = 4;         ///< backward steps are seeded with a short ramp
};

/// Runs the selected scheme for each epsilon on the Riemann problem, maps
/// the result to physical coordinates and measures the L1 distance to the
/// exact scalar solution (scalar systems) or to a fine semidiscrete
/// reference at epsilon_min/4 (systems). Per-epsilon failures are recorded
/// as NaN entries rather than aborting the study.
ConvergenceRecord epsilon_study(const SystemSpec& system,
                                const RiemannProblem& problem, Scheme scheme,
                                const std::vector<double>& epsilons,
                                const StudyOptions& opts = {});

/// Runs both schemes per epsilon and returns the physical-coordinate L1
/// distance between them.
std::vector<std::pair<double, double>> cross_scheme_agreement(
    const SystemSpec& system, const RiemannProblem& problem,
    const std::vector<double>& epsilons, const StudyOptions& opts = {});

/// A pair of nearby initial profiles for the stability study.
struct ProfilePair {
  GridFunction a;
  GridFunction b;
};

struct LipschitzReport {
  struct Entry {
    double initial_distance = 0.0;
    double max_ratio = 0.0;  ///< sup_t d(t)/d(0)
  };
  std::vector<Entry> pairs;
  double measured_l = 0.0;
};

/// Evolves each pair with the selected scheme and returns the largest
/// L1-distance amplification over the recorded steps. Pairs must start at
/// positive distance.
LipschitzReport lipschitz_study(const SystemSpec& system,
                                const std::vector<ProfilePair>& pairs,
                                Scheme scheme, double epsilon,
                                double t_physical,
                                const StudyOptions& opts = {});

/// Step data on a grid: `ramp_cells` nodes of linear ramp smooth the jump
/// (0 keeps it sharp).
GridFunction riemann_grid_profile(const RiemannProblem& problem, double x_min,
                                  double dx, int nodes, double jump_position,
                                  int ramp_cells = 0);

/// Step data on a lattice window; cells at index >= jump_cell take the
/// right state.
LatticeState riemann_lattice(const RiemannProblem& problem, long n_min,
                             int count, long jump_cell = 0);

/// Unit-mass (times `mass`) hat function of the given width over a
/// constant background; the center snaps to the nearest node and the hat
/// corners land on nodes, which keeps the discrete mass exact.
GridFunction spike_profile(const Vec& background, double x_min, double dx,
                           int nodes, double mass, double width,
                           double center);

/// Lattice point mass: `mass` added to the background at the cell nearest
/// to `center`.
LatticeState spike_lattice(const Vec& background, long n_min, int count,
                           double mass, long cell);

/// Smooth random profile with prescribed total variation: a few bumps per
/// characteristic family composed along the eigenvectors at the base
/// state. Deterministic for a given generator state.
GridFunction random_small_tv_profile(const SystemSpec& system,
                                     const Vec& base_state, double x_min,
                                     double dx, int nodes, double tv_target,
                                     std::mt19937_64& rng);

/// Lattice sampling of the same construction.
LatticeState random_small_tv_lattice(const SystemSpec& system,
                                     const Vec& base_state, long n_min,
                                     int count, double tv_target,
                                     std::mt19937_64& rng);

}  // namespace hyperlim

#endif  // HYPERLIM_HARNESS_HPP
