#include "hyperlim/functionals.hpp"

#include <cmath>
#include <string>

#include "hyperlim/errors.hpp"
#include "hyperlim/kernels.hpp"
#include "hyperlim/quadrature.hpp"
#include "hyperlim/semidiscrete.hpp"

namespace hyperlim {

namespace {

/// Directional derivative of the Jacobian field along `dir`, by central
/// differences of the Jacobian with step 1e-5.
void jacobian_directional(const SystemSpec& system, std::span<const double> u,
                          std::span<const double> dir, Mat& out) {
  const int n = system.dimension;
  if (out.n != n) out = Mat(n);
  const double len = norm2(dir);
  if (len == 0.0) {
    std::fill(out.a.begin(), out.a.end(), 0.0);
    return;
  }
  const double s = 1e-5;
  Vec up(n), um(n);
  for (int k = 0; k < n; ++k) {
    const double e = dir[k] / len;
    up[k] = u[k] + s * e;
    um[k] = u[k] - s * e;
  }
  Mat ap(n), am(n);
  system.jacobian_at(up, ap);
  system.jacobian_at(um, am);
  for (size_t e = 0; e < out.a.size(); ++e)
    out.a[e] = (ap.a[e] - am.a[e]) * (len / (2.0 * s));
}

/// Weighted pair sum with a one-sided geometric weight:
///   Sum_{a,b} w(a - b + shift) g_a h_b,
/// where w(k) = flat for k >= 0 and flat * ratio^{-k} for k < 0
/// (0 < ratio < 1). Runs in O(count) with prefix sums.
double geometric_pair_sum(std::span<const double> g, std::span<const double> h,
                          double flat, double ratio, int shift) {
  const int count = static_cast<int>(g.size());
  // prefix[a+1] = sum of g_0..g_a
  std::vector<double> prefix(count + 1, 0.0);
  for (int a = 0; a < count; ++a) prefix[a + 1] = prefix[a] + g[a];
  const double total = prefix[count];
  // decay[m] = Sum_{a < m} ratio^{m-a} g_a
  std::vector<double> decay(count + 2, 0.0);
  for (int m = 1; m <= count + 1; ++m)
    decay[m] = ratio * (decay[m - 1] + (m - 1 < count ? g[m - 1] : 0.0));
  KahanSum sum;
  for (int b = 0; b < count; ++b) {
    // flat branch: a >= b - shift
    const int first_flat = b - shift;
    double flat_mass;
    if (first_flat <= 0)
      flat_mass = total;
    else if (first_flat >= count)
      flat_mass = 0.0;
    else
      flat_mass = total - prefix[first_flat];
    // decaying branch: a < b - shift
    const int m = std::clamp(first_flat, 0, count + 1);
    sum.add(h[b] * (flat * flat_mass + flat * decay[m]));
  }
  return sum.value();
}

std::vector<double> family_abs(const WaveComponents& c, int family) {
  std::vector<double> out(c.count);
  for (int loc = 0; loc < c.count; ++loc)
    out[loc] = std::abs(c.at(loc, family));
  return out;
}

}  // namespace

WaveComponents decompose_backward(const SystemSpec& system,
                                  const GridFunction& profile) {
  const int n = system.dimension;
  const int nodes = profile.size();
  WaveComponents c;
  c.basis_tag = WaveComponents::Basis::pointwise;
  c.families = n;
  c.count = nodes;
  c.location_weight = profile.dx;
  c.strengths.assign(static_cast<size_t>(nodes) * n, 0.0);
  Vec ux(n);
  for (int j = 1; j + 1 < nodes; ++j) {
    auto um = profile.at(j - 1);
    auto up = profile.at(j + 1);
    for (int k = 0; k < n; ++k)
      ux[k] = (up[k] - um[k]) / (2.0 * profile.dx);
    const SpectralData sd = eigen_decompose(system, profile.at(j));
    for (int i = 0; i < n; ++i)
      c.strengths[static_cast<size_t>(j) * n + i] = sd.left_dot(i, ux);
  }
  return c;
}

WaveComponents decompose_semidiscrete(const SystemSpec& system,
                                      const LatticeState& state) {
  const int n = system.dimension;
  const int cells = state.size();
  WaveComponents c;
  c.basis_tag = WaveComponents::Basis::averaged;
  c.families = n;
  c.count = cells;
  c.location_weight = 1.0;
  c.strengths.assign(static_cast<size_t>(cells) * n, 0.0);
  Vec diff(n);
  for (int k = 0; k < cells; ++k) {
    auto cur = state.at(k);
    const double* prev =
        (k == 0) ? state.left_state.data() : state.at(k - 1).data();
    for (int d = 0; d < n; ++d) diff[d] = cur[d] - prev[d];
    const SpectralData sd = averaged_jacobian(
        system, std::span<const double>(prev, n), cur);
    for (int i = 0; i < n; ++i)
      c.strengths[static_cast<size_t>(k) * n + i] = sd.left_dot(i, diff);
  }
  return c;
}

double reconstruction_error_backward(const SystemSpec& system,
                                     const GridFunction& profile,
                                     const WaveComponents& components) {
  const int n = system.dimension;
  const int nodes = profile.size();
  double worst = 0.0;
  Vec ux(n), rec(n);
  for (int j = 1; j + 1 < nodes; ++j) {
    auto um = profile.at(j - 1);
    auto up = profile.at(j + 1);
    for (int k = 0; k < n; ++k)
      ux[k] = (up[k] - um[k]) / (2.0 * profile.dx);
    const SpectralData sd = eigen_decompose(system, profile.at(j));
    std::fill(rec.begin(), rec.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double v = components.at(j, i);
      for (int k = 0; k < n; ++k) rec[k] += v * sd.right(k, i);
    }
    for (int k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(rec[k] - ux[k]));
  }
  return worst;
}

double reconstruction_error_semidiscrete(const SystemSpec& system,
                                         const LatticeState& state,
                                         const WaveComponents& components) {
  const int n = system.dimension;
  const int cells = state.size();
  double worst = 0.0;
  Vec diff(n), rec(n);
  for (int k = 0; k < cells; ++k) {
    auto cur = state.at(k);
    const double* prev =
        (k == 0) ? state.left_state.data() : state.at(k - 1).data();
    for (int d = 0; d < n; ++d) diff[d] = cur[d] - prev[d];
    const SpectralData sd =
        averaged_jacobian(system, std::span<const double>(prev, n), cur);
    std::fill(rec.begin(), rec.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double v = components.at(k, i);
      for (int d = 0; d < n; ++d) rec[d] += v * sd.right(d, i);
    }
    for (int d = 0; d < n; ++d)
      worst = std::max(worst, std::abs(rec[d] - diff[d]));
  }
  return worst;
}

double components_total_variation(const WaveComponents& c) {
  KahanSum tv;
  for (double v : c.strengths) tv.add(std::abs(v));
  return tv.value() * c.location_weight;
}

double potential_backward(const SystemSpec& system,
                          const WaveComponents& current,
                          const WaveComponents& previous, double dx) {
  if (current.count != previous.count ||
      current.families != previous.families)
    throw PreconditionError("potential_backward: component shapes differ");
  const int n = current.families;
  if (n < 2) return 0.0;
  const double flat = 1.0 / system.separation;
  const double alpha = system.separation /
                       (system.speed_cap * (system.speed_cap - system.separation));
  if (!(alpha > 0))
    throw ParameterError("potential_backward: requires separation < speed cap");
  const double ratio = std::exp(-alpha * dx);
  KahanSum q;
  for (int i = 0; i < n; ++i) {
    const auto gi_cur = family_abs(current, i);
    const auto gi_prev = family_abs(previous, i);
    for (int j = i + 1; j < n; ++j) {
      const auto hj_cur = family_abs(current, j);
      const auto hj_prev = family_abs(previous, j);
      q.add(geometric_pair_sum(gi_cur, hj_cur, flat, ratio, 0));
      q.add(geometric_pair_sum(gi_prev, hj_cur, flat, ratio, 0));
      q.add(geometric_pair_sum(gi_cur, hj_prev, flat, ratio, 0));
    }
  }
  return q.value() * dx * dx;
}

double potential_semidiscrete(const SystemSpec& system,
                              const WaveComponents& components) {
  const int n = components.families;
  if (n < 2) return 0.0;
  const double flat = 1.0 / system.separation;
  const double ratio = 1.0 / (1.0 + system.separation / system.speed_cap);
  KahanSum q;
  for (int i = 0; i < n; ++i) {
    const auto gi = family_abs(components, i);
    for (int j = i + 1; j < n; ++j) {
      const auto hj = family_abs(components, j);
      // as written: the site-shifted wave keeps the unshifted weight index
      q.add(geometric_pair_sum(gi, hj, flat, ratio, 0));
      q.add(geometric_pair_sum(gi, hj, flat, ratio, +1));
      q.add(geometric_pair_sum(gi, hj, flat, ratio, -1));
    }
  }
  return q.value();
}

double component_residual_backward(const SystemSpec& system,
                                   const GridFunction& current,
                                   const GridFunction& previous) {
  if (!current.same_grid(previous))
    throw PreconditionError("component_residual_backward: grids differ");
  const int n = system.dimension;
  const int nodes = current.size();
  if (nodes < 5) return 0.0;
  const WaveComponents vc = decompose_backward(system, current);
  const WaveComponents vp = decompose_backward(system, previous);
  // eigenvalues of A(u_n) at every node
  std::vector<double> lambda(static_cast<size_t>(nodes) * n, 0.0);
  for (int j = 0; j < nodes; ++j) {
    const SpectralData sd = eigen_decompose(system, current.at(j));
    for (int i = 0; i < n; ++i)
      lambda[static_cast<size_t>(j) * n + i] = sd.eigenvalues[i];
  }
  KahanSum total;
  for (int j = 2; j + 2 < nodes; ++j) {
    for (int i = 0; i < n; ++i) {
      const double flux_r =
          lambda[static_cast<size_t>(j + 1) * n + i] * vc.at(j + 1, i);
      const double flux_l =
          lambda[static_cast<size_t>(j - 1) * n + i] * vc.at(j - 1, i);
      const double lhs = vc.at(j, i) - vp.at(j, i) +
                         (flux_r - flux_l) / (2.0 * current.dx);
      total.add(std::abs(lhs));
    }
  }
  return total.value() * current.dx;
}

double component_residual_semidiscrete(const SystemSpec& system,
                                       const LatticeState& state,
                                       double probe_dt) {
  const int n = system.dimension;
  const int cells = state.size();
  // centered micro-steps for the component time derivative
  SemidiscreteOptions micro;
  micro.dt = probe_dt;
  micro.escape_tol = 1e300;  // probes may not trip the window rule
  LatticeState forward = integrate(system, state, probe_dt, micro);
  // one RK4 step backward in time
  LatticeState backward = state;
  {
    std::vector<double> k1, k2, k3, k4;
    LatticeState stage = state;
    const double dt = -probe_dt;
    semidiscrete_rhs(system, backward, k1);
    for (size_t i = 0; i < backward.cells.size(); ++i)
      stage.cells[i] = backward.cells[i] + 0.5 * dt * k1[i];
    semidiscrete_rhs(system, stage, k2);
    for (size_t i = 0; i < backward.cells.size(); ++i)
      stage.cells[i] = backward.cells[i] + 0.5 * dt * k2[i];
    semidiscrete_rhs(system, stage, k3);
    for (size_t i = 0; i < backward.cells.size(); ++i)
      stage.cells[i] = backward.cells[i] + dt * k3[i];
    semidiscrete_rhs(system, stage, k4);
    for (size_t i = 0; i < backward.cells.size(); ++i)
      backward.cells[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    backward.time += dt;
  }
  const WaveComponents v0 = decompose_semidiscrete(system, state);
  const WaveComponents vf = decompose_semidiscrete(system, forward);
  const WaveComponents vb = decompose_semidiscrete(system, backward);
  // eigenvalues of the averaged matrices per cell
  std::vector<double> lambda(static_cast<size_t>(cells) * n, 0.0);
  for (int k = 0; k < cells; ++k) {
    const double* prev =
        (k == 0) ? state.left_state.data() : state.at(k - 1).data();
    const SpectralData sd =
        averaged_jacobian(system, std::span<const double>(prev, n), state.at(k));
    for (int i = 0; i < n; ++i)
      lambda[static_cast<size_t>(k) * n + i] = sd.eigenvalues[i];
  }
  KahanSum total;
  for (int k = 0; k < cells; ++k) {
    for (int i = 0; i < n; ++i) {
      const double vdot =
          (vf.at(k, i) - vb.at(k, i)) / (2.0 * probe_dt);
      const double here = lambda[static_cast<size_t>(k) * n + i] * v0.at(k, i);
      const double left =
          (k == 0) ? 0.0
                   : lambda[static_cast<size_t>(k - 1) * n + i] * v0.at(k - 1, i);
      total.add(std::abs(vdot + here - left));
    }
  }
  return total.value();
}

std::vector<FunctionalReport> lyapunov_track(
    const SystemSpec& system, std::span<const BackwardRunState> record,
    const LyapunovOptions& opts) {
  std::vector<FunctionalReport> reports;
  reports.reserve(record.size());
  for (const auto& state : record) {
    const GridFunction& prev =
        state.previous ? *state.previous : state.profile;
    const WaveComponents vc = decompose_backward(system, state.profile);
    const WaveComponents vp = decompose_backward(system, prev);
    FunctionalReport r;
    r.step = state.step_index;
    r.time = static_cast<double>(state.step_index);
    r.total_variation = components_total_variation(vc);
    r.interaction_potential =
        potential_backward(system, vc, vp, state.profile.dx);
    r.c0 = opts.c0;
    r.lyapunov = r.total_variation + opts.c0 * r.interaction_potential;
    if (opts.with_source && state.previous)
      r.source_magnitude =
          component_residual_backward(system, state.profile, prev);
    reports.push_back(r);
  }
  return reports;
}

std::vector<FunctionalReport> lyapunov_track(
    const SystemSpec& system, std::span<const LatticeState> snapshots,
    const LyapunovOptions& opts) {
  std::vector<FunctionalReport> reports;
  reports.reserve(snapshots.size());
  long step = 0;
  for (const auto& state : snapshots) {
    const WaveComponents vc = decompose_semidiscrete(system, state);
    FunctionalReport r;
    r.step = step++;
    r.time = state.time;
    r.total_variation = components_total_variation(vc);
    r.interaction_potential = potential_semidiscrete(system, vc);
    r.c0 = opts.c0;
    r.lyapunov = r.total_variation + opts.c0 * r.interaction_potential;
    if (opts.with_source)
      r.source_magnitude = component_residual_semidiscrete(system, state);
    reports.push_back(r);
  }
  return reports;
}

std::vector<size_t> lyapunov_violations(
    std::span<const FunctionalReport> reports, double slack) {
  std::vector<size_t> bad;
  for (size_t k = 1; k < reports.size(); ++k)
    if (reports[k].lyapunov - reports[k - 1].lyapunov > slack) bad.push_back(k);
  return bad;
}

GridFunction linearized_backward_step(const SystemSpec& system,
                                      const GridFunction& u_prev,
                                      const GridFunction& u_curr,
                                      const GridFunction& h_prev) {
  if (!u_curr.same_grid(u_prev) || !h_prev.same_grid(u_prev))
    throw PreconditionError("linearized_backward_step: grids differ");
  const int n = system.dimension;
  const int nodes = u_curr.size();
  const double dx = u_curr.dx;

  // centered state derivative at the nodes (one-sided at the edges)
  std::vector<double> ux(static_cast<size_t>(nodes) * n);
  for (int j = 0; j < nodes; ++j) {
    const int jm = std::max(0, j - 1);
    const int jp = std::min(nodes - 1, j + 1);
    const double denom = (jp - jm) * dx;
    for (int k = 0; k < n; ++k)
      ux[static_cast<size_t>(j) * n + k] =
          denom > 0 ? (u_curr.at(jp)[k] - u_curr.at(jm)[k]) / denom : 0.0;
  }

  GridFunction h = h_prev;  // metadata; overwritten below
  for (int k = 0; k < n; ++k) h.at(0)[k] = h_prev.at(0)[k];
  h.left_state = h_prev.left_state;

  Mat a(n), da(n);
  Vec rhs(n), dau(n), hloc(n), u(n), uxl(n), hp(n);
  Vec k1(n), k2(n), k3(n), k4(n), stage(n);

  // dh/dx = A(u)^{-1} [ h_prev - h - (DA(u) h) u_x ] at the point
  auto slope_at = [&](std::span<const double> u_at,
                      std::span<const double> ux_at,
                      std::span<const double> hprev_at,
                      std::span<const double> h_at, Vec& out) {
    jacobian_directional(system, u_at, h_at, da);
    da.apply(ux_at, dau);
    for (int k = 0; k < n; ++k) out[k] = hprev_at[k] - h_at[k] - dau[k];
    system.jacobian_at(u_at, a);
    solve_inplace(a, out);
  };

  for (int j = 0; j + 1 < nodes; ++j) {
    // endpoint and midpoint samples of u, u_x and h_prev
    auto ul = u_curr.at(j);
    auto ur = u_curr.at(j + 1);
    auto hl = h_prev.at(j);
    auto hr = h_prev.at(j + 1);
    for (int k = 0; k < n; ++k) {
      u[k] = 0.5 * (ul[k] + ur[k]);
      // exact centered derivative at the midpoint
      uxl[k] = (ur[k] - ul[k]) / dx;
      hp[k] = 0.5 * (hl[k] + hr[k]);
    }
    std::span<const double> ux_l(ux.data() + static_cast<size_t>(j) * n,
                                 static_cast<size_t>(n));
    std::span<const double> ux_r(ux.data() + static_cast<size_t>(j + 1) * n,
                                 static_cast<size_t>(n));

    auto hcur = h.at(j);
    for (int k = 0; k < n; ++k) hloc[k] = hcur[k];

    slope_at(ul, ux_l, hl, hloc, k1);
    for (int k = 0; k < n; ++k) stage[k] = hloc[k] + 0.5 * dx * k1[k];
    slope_at(u, uxl, hp, stage, k2);
    for (int k = 0; k < n; ++k) stage[k] = hloc[k] + 0.5 * dx * k2[k];
    slope_at(u, uxl, hp, stage, k3);
    for (int k = 0; k < n; ++k) stage[k] = hloc[k] + dx * k3[k];
    slope_at(ur, ux_r, hr, stage, k4);

    auto out = h.at(j + 1);
    for (int k = 0; k < n; ++k)
      out[k] = hloc[k] +
               dx / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  return h;
}

void linearized_semidiscrete_rhs(const SystemSpec& system,
                                 const LatticeState& state,
                                 std::span<const double> h,
                                 std::vector<double>& out) {
  const int dim = state.dim;
  const int cells = state.size();
  if (h.size() != state.cells.size())
    throw PreconditionError("linearized_semidiscrete_rhs: size mismatch");
  out.resize(h.size());
  Mat df(dim);
  Vec hv(dim), tmp(dim);
  Vec contrib_left(dim, 0.0);  // Df(u_{k-1}) h_{k-1}; ghost h is zero
  for (int k = 0; k < cells; ++k) {
    system.jacobian_at(state.at(k), df);
    for (int c = 0; c < dim; ++c)
      hv[c] = h[static_cast<size_t>(k) * dim + c];
    df.apply(hv, tmp);
    for (int c = 0; c < dim; ++c)
      out[static_cast<size_t>(k) * dim + c] = -(tmp[c] - contrib_left[c]);
    contrib_left = tmp;
  }
}

}  // namespace hyperlim
