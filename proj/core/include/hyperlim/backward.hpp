#ifndef HYPERLIM_BACKWARD_HPP
#define HYPERLIM_BACKWARD_HPP

#include <functional>
#include <vector>

#include "hyperlim/state.hpp"
#include "hyperlim/system.hpp"

namespace hyperlim {

struct BackwardOptions {
  double tv_budget = 0.1;    ///< largest admissible Tot.Var. of the input
  double escape_tol = 1e-8;  ///< variation allowed in the last 5% of nodes
  int stride = 1;            ///< record every stride-th step
};

/// One backward time step: given u_{n-1}, solve
///   u_n - u_{n-1} + A(u_n) u_{n,x} = 0
/// recast as the spatial ODE  du_n/dx = A(u_n)^{-1} (u_{n-1}(x) - u_n(x)),
/// marched left to right from u_n(x_min) = left_state with classical RK4 on
/// the grid; u_{n-1} is linearly interpolated at half nodes.
///
/// All speeds are positive and bounded away from zero, so the left-to-right
/// march is well posed and A is invertible along the way.
///
/// Throws DomainEscapeError (with the first offending node) if the solution
/// leaves the enlarged box.
GridFunction backward_step(const SystemSpec& system,
                           const GridFunction& previous);

/// L1 norm of the residual u_n - u_{n-1} + A(u_n) u_{n,x} with a centered
/// difference for u_{n,x}, over interior nodes. Second-order small for
/// resolved profiles; used by the grid-refinement checks.
double backward_residual_l1(const SystemSpec& system,
                            const GridFunction& current,
                            const GridFunction& previous);

using BackwardHook = std::function<void(const BackwardRunState&)>;

/// Iterates backward_step `steps` times. The hook (if any) sees every step;
/// the returned record keeps step 0, every stride-th step and the final
/// step. Errors from backward_step are rethrown with the step index
/// attached; the run aborts if nontrivial variation reaches the last 5% of
/// the grid or the input variation exceeds opts.tv_budget.
std::vector<BackwardRunState> run_backward(const SystemSpec& system,
                                           const GridFunction& initial,
                                           long steps,
                                           const BackwardOptions& opts = {},
                                           const BackwardHook& hook = {});

}  // namespace hyperlim

#endif  // HYPERLIM_BACKWARD_HPP
