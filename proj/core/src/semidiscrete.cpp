#include "hyperlim/semidiscrete.hpp"

#include <cmath>
#include <string>

#include "hyperlim/errors.hpp"
#include "hyperlim/functionals.hpp"

namespace hyperlim {

namespace {

double tail_variation(const LatticeState& s) {
  const int n = s.size();
  const int start = std::max(0, n - std::max(2, n / 20));
  double tv = 0;
  for (int k = start + 1; k < n; ++k) {
    auto cur = s.at(k);
    auto prev = s.at(k - 1);
    for (int c = 0; c < s.dim; ++c) tv += std::abs(cur[c] - prev[c]);
  }
  return tv;
}

void check_admissible(const SystemSpec& system, const LatticeState& s,
                      double time) {
  const int n = s.size();
  for (int k = 0; k < n; ++k) {
    if (!system.in_enlarged_box(s.at(k)))
      throw DomainEscapeError("integrate: cell " +
                                  std::to_string(s.n_min + k) +
                                  " left the enlarged box at t = " +
                                  std::to_string(time),
                              s.n_min + k, time);
  }
}

}  // namespace

void semidiscrete_rhs(const SystemSpec& system, const LatticeState& state,
                      std::vector<double>& out) {
  const int dim = state.dim;
  const int cells = state.size();
  out.resize(state.cells.size());
  Vec f_here(dim), f_left(dim);
  system.flux_at(state.left_state, f_left);
  for (int k = 0; k < cells; ++k) {
    system.flux_at(state.at(k), f_here);
    for (int c = 0; c < dim; ++c) {
      out[static_cast<size_t>(k) * dim + c] = -(f_here[c] - f_left[c]);
    }
    std::swap(f_here, f_left);
  }
}

std::vector<double> lattice_difference(const LatticeState& state) {
  const int dim = state.dim;
  const int cells = state.size();
  std::vector<double> v(state.cells.size());
  for (int k = 0; k < cells; ++k) {
    auto cur = state.at(k);
    const double* prev =
        (k == 0) ? state.left_state.data() : state.at(k - 1).data();
    for (int c = 0; c < dim; ++c)
      v[static_cast<size_t>(k) * dim + c] = cur[c] - prev[c];
  }
  return v;
}

LatticeState integrate(const SystemSpec& system, const LatticeState& initial,
                       double t_final, const SemidiscreteOptions& opts,
                       const LatticeHook& hook) {
  if (t_final < 0) throw PreconditionError("integrate: t_final must be >= 0");
  if (!(opts.dt > 0)) throw PreconditionError("integrate: dt must be positive");
  LatticeState s = initial;
  check_admissible(system, s, s.time);
  if (hook) hook(s);
  if (t_final == 0.0) return s;

  const double t_end = s.time + t_final;
  std::vector<double> k1, k2, k3, k4;
  LatticeState stage = s;
  long step = 0;
  while (s.time < t_end - 1e-12 * std::max(1.0, t_end)) {
    const double dt = std::min(opts.dt, t_end - s.time);
    semidiscrete_rhs(system, s, k1);
    stage.cells = s.cells;
    for (size_t i = 0; i < s.cells.size(); ++i)
      stage.cells[i] = s.cells[i] + 0.5 * dt * k1[i];
    semidiscrete_rhs(system, stage, k2);
    for (size_t i = 0; i < s.cells.size(); ++i)
      stage.cells[i] = s.cells[i] + 0.5 * dt * k2[i];
    semidiscrete_rhs(system, stage, k3);
    for (size_t i = 0; i < s.cells.size(); ++i)
      stage.cells[i] = s.cells[i] + dt * k3[i];
    semidiscrete_rhs(system, stage, k4);
    for (size_t i = 0; i < s.cells.size(); ++i)
      s.cells[i] +=
          dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    s.time += dt;
    ++step;
    check_admissible(system, s, s.time);
    if (tail_variation(s) > opts.escape_tol)
      throw DomainEscapeError(
          "integrate: variation reached the last 5% of the window at t = " +
              std::to_string(s.time),
          s.n_min + s.size() - 1, s.time, step);
    const bool last = !(s.time < t_end - 1e-12 * std::max(1.0, t_end));
    if (hook && (step % opts.snapshot_stride == 0 || last)) hook(s);
  }
  return s;
}

std::pair<LatticeState, std::vector<double>> integrate_with_tangent(
    const SystemSpec& system, const LatticeState& initial,
    const std::vector<double>& tangent0, double t_final,
    const SemidiscreteOptions& opts) {
  if (tangent0.size() != initial.cells.size())
    throw PreconditionError("integrate_with_tangent: size mismatch");
  LatticeState s = initial;
  std::vector<double> h = tangent0;
  if (t_final == 0.0) return {s, h};

  // tangent RHS at the given stage state, via the shared linearized
  // operator
  auto tangent_rhs = [&](const LatticeState& u, const std::vector<double>& hh,
                         std::vector<double>& out) {
    linearized_semidiscrete_rhs(system, u, hh, out);
  };

  const double t_end = s.time + t_final;
  LatticeState us = s;
  std::vector<double> hk1, hk2, hk3, hk4, k1, k2, k3, k4, hstage;
  while (s.time < t_end - 1e-12 * std::max(1.0, t_end)) {
    const double dt = std::min(opts.dt, t_end - s.time);
    semidiscrete_rhs(system, s, k1);
    tangent_rhs(s, h, hk1);

    us.cells = s.cells;
    hstage = h;
    for (size_t i = 0; i < s.cells.size(); ++i) {
      us.cells[i] = s.cells[i] + 0.5 * dt * k1[i];
      hstage[i] = h[i] + 0.5 * dt * hk1[i];
    }
    semidiscrete_rhs(system, us, k2);
    tangent_rhs(us, hstage, hk2);

    for (size_t i = 0; i < s.cells.size(); ++i) {
      us.cells[i] = s.cells[i] + 0.5 * dt * k2[i];
      hstage[i] = h[i] + 0.5 * dt * hk2[i];
    }
    semidiscrete_rhs(system, us, k3);
    tangent_rhs(us, hstage, hk3);

    for (size_t i = 0; i < s.cells.size(); ++i) {
      us.cells[i] = s.cells[i] + dt * k3[i];
      hstage[i] = h[i] + dt * hk3[i];
    }
    semidiscrete_rhs(system, us, k4);
    tangent_rhs(us, hstage, hk4);

    for (size_t i = 0; i < s.cells.size(); ++i) {
      s.cells[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      h[i] += dt / 6.0 * (hk1[i] + 2.0 * hk2[i] + 2.0 * hk3[i] + hk4[i]);
    }
    s.time += dt;
    check_admissible(system, s, s.time);
  }
  return {s, h};
}

}  // namespace hyperlim
