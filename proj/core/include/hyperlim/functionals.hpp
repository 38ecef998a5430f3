#ifndef HYPERLIM_FUNCTIONALS_HPP
#define HYPERLIM_FUNCTIONALS_HPP

#include <span>
#include <vector>

#include "hyperlim/state.hpp"
#include "hyperlim/system.hpp"

namespace hyperlim {

/// Scalar wave strengths per location and characteristic family, obtained
/// by projecting a spatial derivative (backward scheme) or a cell
/// difference (semi-discrete scheme) on the eigenvector basis. The same
/// container carries perturbation components.
struct WaveComponents {
  enum class Basis { pointwise, averaged };
  Basis basis_tag = Basis::pointwise;
  int families = 0;
  int count = 0;                  ///< number of locations
  double location_weight = 1.0;   ///< dx for grid derivatives, 1 for lattice
  std::vector<double> strengths;  ///< [loc * families + family]

  double at(int loc, int family) const {
    return strengths[static_cast<size_t>(loc) * families + family];
  }
  std::span<const double> family_slice(int loc) const {
    return {strengths.data() + static_cast<size_t>(loc) * families,
            static_cast<size_t>(families)};
  }
};

/// Per-step summary of the functional machinery.
struct FunctionalReport {
  long step = 0;
  double time = 0.0;
  double total_variation = 0.0;
  double interaction_potential = 0.0;
  double lyapunov = 0.0;  ///< total_variation + c0 * interaction_potential
  double c0 = 0.0;
  double source_magnitude = 0.0;
};

/// Projects the centered spatial derivative of the profile on the
/// pointwise eigenvector basis: v^i(x_j) = l^i(u_j) . u_x(x_j). Boundary
/// nodes carry zero strengths (the profile is flat there by the window
/// rule).
WaveComponents decompose_backward(const SystemSpec& system,
                                  const GridFunction& profile);

/// Projects the cell differences v_k = u_k - u_{k-1} on the basis of the
/// averaged Jacobian of the pair (u_{k-1}, u_k).
WaveComponents decompose_semidiscrete(const SystemSpec& system,
                                      const LatticeState& state);

/// Largest reconstruction error max_loc |Sum_i v^i r_i - w|_inf where w is
/// the decomposed vector; verifies the biorthogonality of the stored basis.
double reconstruction_error_backward(const SystemSpec& system,
                                     const GridFunction& profile,
                                     const WaveComponents& components);
double reconstruction_error_semidiscrete(const SystemSpec& system,
                                         const LatticeState& state,
                                         const WaveComponents& components);

/// Total variation carried by the components:
/// Sum over locations and families of |v^i| times the location weight.
double components_total_variation(const WaveComponents& c);

/// Interaction potential of the backward scheme between the current and
/// previous profiles,
///   Q = Sum_{i<j} SumSum P0(x-y) { |v^i_n(x) v^j_n(y)|
///        + |v^i_{n-1}(x) v^j_n(y)| + |v^i_n(x) v^j_{n-1}(y)| } dx dy,
/// discretized with cell weights dx^2. Evaluated in O(count) per family
/// pair with prefix sums (the weight is flat on one side and geometric on
/// the other).
double potential_backward(const SystemSpec& system,
                          const WaveComponents& current,
                          const WaveComponents& previous, double dx);

/// Lattice interaction potential of a single state,
///   Q = Sum_{i<j} Sum_{n,m} P(n-m) { |v^i_n v^j_m| + |v^i_{n-1} v^j_m|
///                                     + |v^i_n v^j_{m-1}| },
/// with the site-shifted fields taken as written (the shift moves the wave,
/// the weight keeps the unshifted indices). Absolute values are applied to
/// every product.
double potential_semidiscrete(const SystemSpec& system,
                              const WaveComponents& components);

/// L1 size of the conservation-form left-hand side of the component
/// equations; by the component expansion this equals the aggregate
/// interaction source, so it measures quadratic coupling directly.
/// Backward: |v^i_n - v^i_{n-1} + d/dx(lambda_i v^i_n)|, centered in x.
double component_residual_backward(const SystemSpec& system,
                                   const GridFunction& current,
                                   const GridFunction& previous);
/// Semi-discrete: |d/dt v^i_n + lambda_{i,n} v^i_n - lambda_{i,n-1}
/// v^i_{n-1}| with the time derivative of the components estimated by a
/// centered micro-step of the lattice ODE.
double component_residual_semidiscrete(const SystemSpec& system,
                                       const LatticeState& state,
                                       double probe_dt = 1e-3);

struct LyapunovOptions {
  double c0 = 1.0;
  double slack = 1e-4;        ///< tolerated per-step increase before flagging
  bool with_source = true;    ///< also compute component residuals
};

/// Per recorded step, assembles the FunctionalReport for a backward run.
/// Step 0 (no previous profile) uses the degenerate pair (u_0, u_0).
std::vector<FunctionalReport> lyapunov_track(
    const SystemSpec& system, std::span<const BackwardRunState> record,
    const LyapunovOptions& opts = {});

/// Same for a sequence of lattice snapshots.
std::vector<FunctionalReport> lyapunov_track(
    const SystemSpec& system, std::span<const LatticeState> snapshots,
    const LyapunovOptions& opts = {});

/// Indices k where report[k].lyapunov exceeds report[k-1].lyapunov by more
/// than the slack.
std::vector<size_t> lyapunov_violations(
    std::span<const FunctionalReport> reports, double slack);

/// One backward step of the first-order perturbation equation around the
/// pair (u_prev, u_curr = backward_step(u_prev)):
///   h_n - h_{n-1} + (A(u_n) h_n)_x
///       = (DA(u_n) u_{n,x}) h_n - (DA(u_n) h_n) u_{n,x},
/// marched in x like the state itself; DA is applied through central
/// differences of the Jacobian with step 1e-5.
GridFunction linearized_backward_step(const SystemSpec& system,
                                      const GridFunction& u_prev,
                                      const GridFunction& u_curr,
                                      const GridFunction& h_prev);

/// Exact tangent right-hand side of the lattice ODE:
///   dh_k/dt = -( Df(u_k) h_k - Df(u_{k-1}) h_{k-1} ),
/// ghost perturbation zero. `h` and `out` are cell-major.
void linearized_semidiscrete_rhs(const SystemSpec& system,
                                 const LatticeState& state,
                                 std::span<const double> h,
                                 std::vector<double>& out);

}  // namespace hyperlim

#endif  // HYPERLIM_FUNCTIONALS_HPP
