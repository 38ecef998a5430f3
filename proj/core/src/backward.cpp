#include "hyperlim/backward.hpp"

#include <cmath>
#include <string>

#include "hyperlim/errors.hpp"
#include "hyperlim/quadrature.hpp"

namespace hyperlim {

namespace {

/// Variation carried by the trailing 5% of the nodes.
double tail_variation(const GridFunction& g) {
  const int n = g.size();
  const int start = std::max(0, n - std::max(2, n / 20));
  double tv = 0;
  for (int j = start + 1; j < n; ++j) {
    auto cur = g.at(j);
    auto prev = g.at(j - 1);
    for (int k = 0; k < g.dim; ++k) tv += std::abs(cur[k] - prev[k]);
  }
  return tv;
}

struct Workspace {
  Mat a;
  Vec rhs;
  Vec mid;
  Vec k1, k2, k3, k4, stage;
  explicit Workspace(int n)
      : a(n), rhs(n), mid(n), k1(n), k2(n), k3(n), k4(n), stage(n) {}
};

/// Evaluates du/dx = A(u)^{-1} (u_prev_at_x - u) into `out`.
void slope(const SystemSpec& system, std::span<const double> u,
           std::span<const double> u_prev_at_x, Workspace& ws,
           std::span<double> out) {
  const int n = system.dimension;
  system.jacobian_at(u, ws.a);
  for (int k = 0; k < n; ++k) out[k] = u_prev_at_x[k] - u[k];
  solve_inplace(ws.a, out);
}

}  // namespace

GridFunction backward_step(const SystemSpec& system,
                           const GridFunction& previous) {
  const int n = system.dimension;
  const int nodes = previous.size();
  if (nodes < 3) throw PreconditionError("backward_step: grid too small");
  GridFunction next = previous;  // copies grid metadata and left state
  Workspace ws(n);

  // inflow boundary value
  for (int k = 0; k < n; ++k) next.at(0)[k] = previous.left_state[k];

  Vec u(n);
  const double dx = previous.dx;
  for (int j = 0; j + 1 < nodes; ++j) {
    auto prev_l = previous.at(j);
    auto prev_r = previous.at(j + 1);
    for (int k = 0; k < n; ++k)
      ws.mid[k] = 0.5 * (prev_l[k] + prev_r[k]);

    auto cur = next.at(j);
    for (int k = 0; k < n; ++k) u[k] = cur[k];

    slope(system, u, prev_l, ws, ws.k1);
    for (int k = 0; k < n; ++k) ws.stage[k] = u[k] + 0.5 * dx * ws.k1[k];
    slope(system, ws.stage, ws.mid, ws, ws.k2);
    for (int k = 0; k < n; ++k) ws.stage[k] = u[k] + 0.5 * dx * ws.k2[k];
    slope(system, ws.stage, ws.mid, ws, ws.k3);
    for (int k = 0; k < n; ++k) ws.stage[k] = u[k] + dx * ws.k3[k];
    slope(system, ws.stage, prev_r, ws, ws.k4);

    auto out = next.at(j + 1);
    for (int k = 0; k < n; ++k)
      out[k] = u[k] + dx / 6.0 *
                          (ws.k1[k] + 2.0 * ws.k2[k] + 2.0 * ws.k3[k] +
                           ws.k4[k]);
    if (!system.in_enlarged_box(out))
      throw DomainEscapeError(
          "backward_step: solution left the enlarged box at node " +
              std::to_string(j + 1),
          j + 1, next.x(j + 1));
  }
  return next;
}

double backward_residual_l1(const SystemSpec& system,
                            const GridFunction& current,
                            const GridFunction& previous) {
  if (!current.same_grid(previous))
    throw PreconditionError("backward_residual_l1: grids differ");
  const int n = system.dimension;
  const int nodes = current.size();
  Mat a(n);
  Vec ux(n), au(n);
  KahanSum total;
  for (int j = 1; j + 1 < nodes; ++j) {
    auto um = current.at(j - 1);
    auto u0 = current.at(j);
    auto up = current.at(j + 1);
    for (int k = 0; k < n; ++k)
      ux[k] = (up[k] - um[k]) / (2.0 * current.dx);
    system.jacobian_at(u0, a);
    a.apply(ux, au);
    auto q = previous.at(j);
    for (int k = 0; k < n; ++k)
      total.add(std::abs(u0[k] - q[k] + au[k]));
  }
  return total.value() * current.dx;
}

std::vector<BackwardRunState> run_backward(const SystemSpec& system,
                                           const GridFunction& initial,
                                           long steps,
                                           const BackwardOptions& opts,
                                           const BackwardHook& hook) {
  if (steps < 1) throw PreconditionError("run_backward: steps must be >= 1");
  std::vector<BackwardRunState> record;
  record.push_back({0, initial, std::nullopt});
  GridFunction prev = initial;
  for (long step = 1; step <= steps; ++step) {
    const double tv = total_variation(prev);
    if (tv > opts.tv_budget)
      throw PreconditionError(
          "run_backward: total variation " + std::to_string(tv) +
          " exceeds the budget " + std::to_string(opts.tv_budget) +
          " before step " + std::to_string(step));
    GridFunction cur;
    try {
      cur = backward_step(system, prev);
    } catch (const DomainEscapeError& e) {
      throw DomainEscapeError(std::string(e.what()) + " (step " +
                                  std::to_string(step) + ")",
                              e.location, e.when, step);
    }
    if (tail_variation(cur) > opts.escape_tol)
      throw DomainEscapeError(
          "run_backward: variation reached the last 5% of the grid at step " +
              std::to_string(step),
          cur.size() - 1, cur.x_max(), step);
    BackwardRunState state{step, std::move(cur), std::move(prev)};
    if (hook) hook(state);
    prev = state.profile;
    if (step % opts.stride == 0 || step == steps)
      record.push_back(std::move(state));
  }
  return record;
}

}  // namespace hyperlim
