#ifndef HYPERLIM_SEMIDISCRETE_HPP
#define HYPERLIM_SEMIDISCRETE_HPP

#include <functional>
#include <vector>

#include "hyperlim/state.hpp"
#include "hyperlim/system.hpp"

namespace hyperlim {

struct SemidiscreteOptions {
  double dt = 0.05;          ///< fixed RK4 time step
  int snapshot_stride = 1;   ///< hook every stride-th step
  double escape_tol = 1e-8;  ///< variation allowed in the last 5% of cells
};

/// Right-hand side of the upwind lattice ODE
///   du_k/dt = -( f(u_k) - f(u_{k-1}) ),
/// with the constant ghost state as the left neighbour of the first cell.
/// The result is stored cell-major in `out` (resized as needed).
void semidiscrete_rhs(const SystemSpec& system, const LatticeState& state,
                      std::vector<double>& out);

/// Cell differences v_k = u_k - u_{k-1} (ghost state for the first cell),
/// cell-major.
std::vector<double> lattice_difference(const LatticeState& state);

using LatticeHook = std::function<void(const LatticeState&)>;

/// Integrates the lattice ODE to t_final with classical RK4 at fixed dt
/// (a final shorter step lands exactly on t_final). The hook sees the
/// initial state, every stride-th step, and the final state. Aborts with
/// DomainEscapeError if a cell leaves the enlarged box or nontrivial
/// variation reaches the last 5% of the window.
LatticeState integrate(const SystemSpec& system, const LatticeState& initial,
                       double t_final, const SemidiscreteOptions& opts = {},
                       const LatticeHook& hook = {});

/// Integrates the pair (u, h) where h obeys the exact tangent dynamics
///   dh_k/dt = -( Df(u_k) h_k - Df(u_{k-1}) h_{k-1} ),
/// coupled through the same RK4 stages as u; this is the derivative of
/// `integrate` with respect to its initial data applied to h0.
/// Returns the final (state, tangent) pair; `tangent` is cell-major and the
/// ghost perturbation is zero.
std::pair<LatticeState, std::vector<double>> integrate_with_tangent(
    const SystemSpec& system, const LatticeState& initial,
    const std::vector<double>& tangent0, double t_final,
    const SemidiscreteOptions& opts = {});

}  // namespace hyperlim

#endif  // HYPERLIM_SEMIDISCRETE_HPP
