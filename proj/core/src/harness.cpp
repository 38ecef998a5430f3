#include "hyperlim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "hyperlim/errors.hpp"
#include "hyperlim/quadrature.hpp"

namespace hyperlim {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

/// Smooth compactly supported mollifier bump on |s| < 1.
double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

struct BumpSet {
  struct Entry {
    int family;
    double amplitude;
    double center;
    double width;
  };
  std::vector<Entry> entries;

  void eval(const SystemSpec& system, const Vec& base,
            const std::vector<Vec>& rights, double x, std::span<double> out) const {
    for (size_t k = 0; k < base.size(); ++k) out[k] = base[k];
    for (const auto& e : entries) {
      const double phi = e.amplitude * bump((x - e.center) / e.width);
      if (phi == 0.0) continue;
      const Vec& r = rights[e.family];
      for (size_t k = 0; k < base.size(); ++k) out[k] += phi * r[k];
    }
  }
};

BumpSet random_bumps(const SystemSpec& system, std::mt19937_64& rng, double lo,
                     double hi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double span = hi - lo;
  BumpSet bumps;
  for (int i = 0; i < system.dimension; ++i) {
    for (int b = 0; b < 2; ++b) {
      BumpSet::Entry e;
      e.family = i;
      e.amplitude = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 0.5 * unit(rng));
      e.center = lo + (0.15 + 0.2 * unit(rng)) * span;
      e.width = (0.03 + 0.03 * unit(rng)) * span;
      bumps.entries.push_back(e);
    }
  }
  return bumps;
}

}  // namespace

std::string scheme_name(Scheme s) {
  return s == Scheme::backward ? "backward" : "semidiscrete";
}

PhysicalProfile to_physical(const GridFunction& g, double epsilon) {
  PhysicalProfile p;
  p.dim = g.dim;
  const int n = g.size();
  p.xs.resize(n);
  for (int j = 0; j < n; ++j) p.xs[j] = epsilon * g.x(j);
  p.values = g.values;
  return p;
}

PhysicalProfile to_physical(const LatticeState& s, double epsilon) {
  PhysicalProfile p;
  p.dim = s.dim;
  const int n = s.size();
  p.xs.resize(n);
  for (int k = 0; k < n; ++k)
    p.xs[k] = epsilon * static_cast<double>(s.n_min + k);
  p.values = s.cells;
  return p;
}

double l1_distance(const PhysicalProfile& a, const PhysicalProfile& b) {
  if (a.dim != b.dim) throw PreconditionError("l1_distance: dimension mismatch");
  if (a.xs.empty() || b.xs.empty()) return 0.0;
  const double ha = a.spacing(), hb = b.spacing();
  const double lo = std::max(a.xs.front() - 0.5 * ha, b.xs.front() - 0.5 * hb);
  const double hi = std::min(a.xs.back() + 0.5 * ha, b.xs.back() + 0.5 * hb);
  if (hi <= lo) return 0.0;
  const double fine = 0.5 * std::min(ha, hb);
  const long cells = std::max<long>(1, std::lround((hi - lo) / fine));
  const double h = (hi - lo) / cells;
  auto cell_of = [](const PhysicalProfile& p, double spacing, double x) {
    long j = std::lround((x - p.xs.front()) / spacing);
    j = std::clamp<long>(j, 0, static_cast<long>(p.xs.size()) - 1);
    return j;
  };
  KahanSum dist;
  for (long c = 0; c < cells; ++c) {
    const double x = lo + (c + 0.5) * h;
    const long ja = cell_of(a, ha, x);
    const long jb = cell_of(b, hb, x);
    for (int k = 0; k < a.dim; ++k)
      dist.add(std::abs(a.values[ja * a.dim + k] - b.values[jb * b.dim + k]));
  }
  return dist.value() * h;
}

GridFunction exact_scalar_riemann(const SystemSpec& system,
                                  const RiemannProblem& problem, double t,
                                  double x_min, double dx, int nodes) {
  if (system.dimension != 1)
    throw PreconditionError("exact_scalar_riemann: system must be scalar");
  const double ul = problem.left[0];
  const double ur = problem.right[0];
  GridFunction g = GridFunction::constant(x_min, dx, nodes, problem.left);

  if (ul == ur) return g;

  // classify the flux on the data interval
  const double a = std::min(ul, ur), b = std::max(ul, ur);
  Mat jac(1);
  auto speed = [&](double u) {
    Vec state{u};
    system.jacobian_at(state, jac);
    return jac(0, 0);
  };
  const int probes = 129;
  double prev = speed(a);
  double min_rise = std::numeric_limits<double>::infinity();
  double max_rise = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < probes; ++i) {
    const double u = a + (b - a) * i / (probes - 1);
    const double cur = speed(u);
    min_rise = std::min(min_rise, cur - prev);
    max_rise = std::max(max_rise, cur - prev);
    prev = cur;
  }
  const double scale = std::max(1.0, std::abs(speed(a)));
  const bool linear = std::abs(min_rise) < 1e-12 * scale &&
                      std::abs(max_rise) < 1e-12 * scale;
  if (!linear && min_rise < -1e-12 * scale)
    throw DomainError("exact_scalar_riemann: flux not convex on the interval");

  Vec fl(1), fr(1);
  system.flux_at(problem.left, fl);
  system.flux_at(problem.right, fr);

  if (linear || ul > ur) {
    // traveling jump at the chord speed
    const double s = (fl[0] - fr[0]) / (ul - ur);
    for (int j = 0; j < nodes; ++j)
      g.at(j)[0] = (g.x(j) < s * t) ? ul : ur;
    return g;
  }

  // centered rarefaction between the edge speeds
  const double sl = speed(ul), sr = speed(ur);
  for (int j = 0; j < nodes; ++j) {
    const double x = g.x(j);
    if (t <= 0.0 || x <= sl * t) {
      g.at(j)[0] = ul;
    } else if (x >= sr * t) {
      g.at(j)[0] = ur;
    } else {
      // invert speed(u) = x/t by bisection (speed is increasing)
      const double target = x / t;
      double lo_u = ul, hi_u = ur;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo_u + hi_u);
        if (speed(mid) < target)
          lo_u = mid;
        else
          hi_u = mid;
      }
      g.at(j)[0] = 0.5 * (lo_u + hi_u);
    }
  }
  return g;
}

void ConvergenceRecord::fit_order() {
  std::vector<double> le, lr;
  for (const auto& e : entries)
    if (std::isfinite(e.l1_error) && e.l1_error > 0) {
      le.push_back(std::log(e.epsilon));
      lr.push_back(std::log(e.l1_error));
    }
  if (le.size() < 2) {
    has_order = false;
    return;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < le.size(); ++i) {
    mx += le[i];
    my += lr[i];
  }
  mx /= le.size();
  my /= le.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < le.size(); ++i) {
    sxy += (le[i] - mx) * (lr[i] - my);
    sxx += (le[i] - mx) * (le[i] - mx);
  }
  fitted_order = sxy / sxx;
  has_order = true;
}

GridFunction riemann_grid_profile(const RiemannProblem& problem, double x_min,
                                  double dx, int nodes, double jump_position,
                                  int ramp_cells) {
  GridFunction g = GridFunction::constant(x_min, dx, nodes, problem.left);
  const double half = 0.5 * ramp_cells * dx;
  for (int j = 0; j < nodes; ++j) {
    const double x = g.x(j);
    double w;  // weight of the right state
    if (x <= jump_position - half)
      w = 0.0;
    else if (x >= jump_position + half || ramp_cells == 0)
      w = (x >= jump_position) ? 1.0 : 0.0;
    else
      w = (x - (jump_position - half)) / (2.0 * half);
    for (size_t k = 0; k < problem.left.size(); ++k)
      g.at(j)[k] = (1.0 - w) * problem.left[k] + w * problem.right[k];
  }
  return g;
}

LatticeState riemann_lattice(const RiemannProblem& problem, long n_min,
                             int count, long jump_cell) {
  LatticeState s = LatticeState::constant(n_min, count, problem.left);
  for (int k = 0; k < count; ++k) {
    if (s.n_min + k >= jump_cell)
      for (size_t c = 0; c < problem.right.size(); ++c)
        s.at(k)[c] = problem.right[c];
  }
  return s;
}

GridFunction spike_profile(const Vec& background, double x_min, double dx,
                           int nodes, double mass, double width,
                           double center) {
  GridFunction g = GridFunction::constant(x_min, dx, nodes, background);
  const int center_node =
      static_cast<int>(std::lround((center - x_min) / dx));
  const int half_cells = std::max(1, static_cast<int>(std::lround(0.5 * width / dx)));
  const double height = mass / (half_cells * dx);
  for (int o = -half_cells; o <= half_cells; ++o) {
    const int j = center_node + o;
    if (j < 0 || j >= nodes) continue;
    const double frac = 1.0 - std::abs(o) / static_cast<double>(half_cells);
    for (size_t k = 0; k < background.size(); ++k)
      g.at(j)[k] = background[k] + height * frac;
  }
  return g;
}

LatticeState spike_lattice(const Vec& background, long n_min, int count,
                           double mass, long cell) {
  LatticeState s = LatticeState::constant(n_min, count, background);
  const long k = cell - n_min;
  if (k < 0 || k >= count)
    throw PreconditionError("spike_lattice: cell outside the window");
  for (size_t c = 0; c < background.size(); ++c) s.at(k)[c] += mass;
  return s;
}

GridFunction random_small_tv_profile(const SystemSpec& system,
                                     const Vec& base_state, double x_min,
                                     double dx, int nodes, double tv_target,
                                     std::mt19937_64& rng) {
  const double hi = x_min + (nodes - 1) * dx;
  const BumpSet bumps = random_bumps(system, rng, x_min, hi);
  const SpectralData sd = eigen_decompose(system, base_state);
  std::vector<Vec> rights(system.dimension);
  for (int i = 0; i < system.dimension; ++i) rights[i] = sd.right_vector(i);

  GridFunction g = GridFunction::constant(x_min, dx, nodes, base_state);
  for (int j = 0; j < nodes; ++j)
    bumps.eval(system, base_state, rights, g.x(j), g.at(j));
  // the construction is additive, so variation scales linearly
  const double tv = total_variation(g);
  if (tv > 0) {
    const double scale = tv_target / tv;
    for (int j = 0; j < nodes; ++j)
      for (int k = 0; k < g.dim; ++k)
        g.at(j)[k] = base_state[k] + scale * (g.at(j)[k] - base_state[k]);
  }
  return g;
}

LatticeState random_small_tv_lattice(const SystemSpec& system,
                                     const Vec& base_state, long n_min,
                                     int count, double tv_target,
                                     std::mt19937_64& rng) {
  const double lo = static_cast<double>(n_min);
  const double hi = static_cast<double>(n_min + count - 1);
  const BumpSet bumps = random_bumps(system, rng, lo, hi);
  const SpectralData sd = eigen_decompose(system, base_state);
  std::vector<Vec> rights(system.dimension);
  for (int i = 0; i < system.dimension; ++i) rights[i] = sd.right_vector(i);

  LatticeState s = LatticeState::constant(n_min, count, base_state);
  for (int k = 0; k < count; ++k)
    bumps.eval(system, base_state, rights, lo + k, s.at(k));
  const double tv = total_variation(s);
  if (tv > 0) {
    const double scale = tv_target / tv;
    for (int k = 0; k < count; ++k)
      for (int c = 0; c < s.dim; ++c)
        s.at(k)[c] = base_state[c] + scale * (s.at(k)[c] - base_state[c]);
  }
  return s;
}

namespace {

/// Shared sizing of the physical domain for the epsilon studies.
void study_domain(const SystemSpec& system, double t_physical,
                  double eps_max, double& x_lo, double& x_hi) {
  x_lo = -0.2;
  x_hi = t_physical * system.speed_cap + 0.3 +
         8.0 * system.speed_cap * std::sqrt(t_physical * eps_max);
}

GridFunction run_backward_riemann(const SystemSpec& system,
                                  const RiemannProblem& problem,
                                  double epsilon, double x_lo, double x_hi,
                                  const StudyOptions& opts) {
  const long steps = std::lround(opts.t_physical / epsilon);
  if (std::abs(steps * epsilon - opts.t_physical) >
      1e-9 * std::max(1.0, opts.t_physical))
    throw PreconditionError(
        "epsilon_study: t_physical must be an integer number of steps");
  const double dx = opts.dx_rescaled;
  const double rx_lo = x_lo / epsilon;
  const double rx_hi = x_hi / epsilon;
  const int nodes = static_cast<int>(std::ceil((rx_hi - rx_lo) / dx)) + 1;
  GridFunction init = riemann_grid_profile(problem, rx_lo, dx, nodes, 0.0,
                                           opts.ramp_cells);
  BackwardOptions bopts;
  bopts.tv_budget = opts.tv_budget;
  bopts.escape_tol = opts.escape_tol;
  bopts.stride = std::max<long>(1, steps);  // keep only the final state
  auto record = run_backward(system, init, steps, bopts);
  return record.back().profile;
}

LatticeState run_semidiscrete_riemann(const SystemSpec& system,
                                      const RiemannProblem& problem,
                                      double epsilon, double x_lo, double x_hi,
                                      const StudyOptions& opts) {
  const long n_lo = static_cast<long>(std::floor(x_lo / epsilon));
  const long n_hi = static_cast<long>(std::ceil(x_hi / epsilon));
  const int count = static_cast<int>(n_hi - n_lo + 1);
  LatticeState init = riemann_lattice(problem, n_lo, count, 0);
  SemidiscreteOptions sopts;
  sopts.dt = opts.dt;
  sopts.escape_tol = opts.escape_tol;
  sopts.snapshot_stride = 1 << 30;
  return integrate(system, init, opts.t_physical / epsilon, sopts);
}

PhysicalProfile reference_profile(const SystemSpec& system,
                                  const RiemannProblem& problem,
                                  const std::vector<double>& epsilons,
                                  double x_lo, double x_hi,
                                  const StudyOptions& opts) {
  const double eps_min = *std::min_element(epsilons.begin(), epsilons.end());
  if (system.dimension == 1) {
    const double fine = 0.5 * eps_min * std::min(opts.dx_rescaled, 1.0);
    const int nodes = static_cast<int>(std::ceil((x_hi - x_lo) / fine)) + 1;
    GridFunction exact = exact_scalar_riemann(system, problem, opts.t_physical,
                                              x_lo, fine, nodes);
    return to_physical(exact, 1.0);
  }
  // fine semidiscrete run as self-consistent reference
  const double eps_ref = eps_min / 4.0;
  return to_physical(
      run_semidiscrete_riemann(system, problem, eps_ref, x_lo, x_hi, opts),
      eps_ref);
}

}  // namespace

ConvergenceRecord epsilon_study(const SystemSpec& system,
                                const RiemannProblem& problem, Scheme scheme,
                                const std::vector<double>& epsilons,
                                const StudyOptions& opts) {
  if (epsilons.empty())
    throw PreconditionError("epsilon_study: need at least one epsilon");
  double x_lo, x_hi;
  const double eps_max = *std::max_element(epsilons.begin(), epsilons.end());
  study_domain(system, opts.t_physical, eps_max, x_lo, x_hi);
  const PhysicalProfile reference =
      reference_profile(system, problem, epsilons, x_lo, x_hi, opts);

  ConvergenceRecord rec;
  for (double eps : epsilons) {
    ConvergenceRecord::Entry e;
    e.epsilon = eps;
    const double t0 = now_seconds();
    try {
      PhysicalProfile run =
          scheme == Scheme::backward
              ? to_physical(
                    run_backward_riemann(system, problem, eps, x_lo, x_hi, opts),
                    eps)
              : to_physical(run_semidiscrete_riemann(system, problem, eps, x_lo,
                                                     x_hi, opts),
                            eps);
      e.l1_error = l1_distance(run, reference);
    } catch (const Error&) {
      e.l1_error = std::numeric_limits<double>::quiet_NaN();
    }
    e.runtime_seconds = now_seconds() - t0;
    rec.entries.push_back(e);
  }
  rec.fit_order();
  return rec;
}

std::vector<std::pair<double, double>> cross_scheme_agreement(
    const SystemSpec& system, const RiemannProblem& problem,
    const std::vector<double>& epsilons, const StudyOptions& opts) {
  if (epsilons.empty())
    throw PreconditionError("cross_scheme_agreement: need epsilons");
  double x_lo, x_hi;
  const double eps_max = *std::max_element(epsilons.begin(), epsilons.end());
  study_domain(system, opts.t_physical, eps_max, x_lo, x_hi);
  std::vector<std::pair<double, double>> out;
  for (double eps : epsilons) {
    const PhysicalProfile back = to_physical(
        run_backward_riemann(system, problem, eps, x_lo, x_hi, opts), eps);
    const PhysicalProfile semi = to_physical(
        run_semidiscrete_riemann(system, problem, eps, x_lo, x_hi, opts), eps);
    out.emplace_back(eps, l1_distance(back, semi));
  }
  return out;
}

LipschitzReport lipschitz_study(const SystemSpec& system,
                                const std::vector<ProfilePair>& pairs,
                                Scheme scheme, double epsilon,
                                double t_physical, const StudyOptions& opts) {
  LipschitzReport report;
  for (const auto& pair : pairs) {
    if (!pair.a.same_grid(pair.b))
      throw PreconditionError("lipschitz_study: pair grids differ");
    LipschitzReport::Entry entry;
    const PhysicalProfile pa0 = to_physical(pair.a, 1.0);
    const PhysicalProfile pb0 = to_physical(pair.b, 1.0);
    entry.initial_distance = l1_distance(pa0, pb0);
    if (!(entry.initial_distance > 0))
      throw PreconditionError(
          "lipschitz_study: pairs must start at positive distance");

    double max_ratio = 0.0;
    if (scheme == Scheme::backward) {
      const long steps = std::lround(t_physical / epsilon);
      BackwardOptions bopts;
      bopts.tv_budget = opts.tv_budget;
      bopts.escape_tol = opts.escape_tol;
      GridFunction a = pair.a, b = pair.b;
      for (long s = 0; s < steps; ++s) {
        a = backward_step(system, a);
        b = backward_step(system, b);
        const double d = l1_distance(to_physical(a, 1.0), to_physical(b, 1.0));
        max_ratio = std::max(max_ratio, d / entry.initial_distance);
      }
    } else {
      // sample both lattices from the pair profiles at integer coordinates
      auto sample = [&](const GridFunction& g) {
        const long n_lo = static_cast<long>(std::ceil(g.x_min));
        const long n_hi = static_cast<long>(std::floor(g.x_max()));
        LatticeState s = LatticeState::constant(
            n_lo, static_cast<int>(n_hi - n_lo + 1), g.left_state);
        for (int k = 0; k < s.size(); ++k) {
          const double x = static_cast<double>(n_lo + k);
          const double pos = (x - g.x_min) / g.dx;
          const int j0 = std::clamp(static_cast<int>(pos), 0, g.size() - 2);
          const double w = pos - j0;
          for (int c = 0; c < g.dim; ++c)
            s.at(k)[c] = (1.0 - w) * g.at(j0)[c] + w * g.at(j0 + 1)[c];
        }
        return s;
      };
      LatticeState a = sample(pair.a), b = sample(pair.b);
      const double d0 =
          l1_distance(to_physical(a, 1.0), to_physical(b, 1.0));
      const double t_end = t_physical / epsilon;
      SemidiscreteOptions sopts;
      sopts.dt = opts.dt;
      sopts.escape_tol = opts.escape_tol;
      const int checkpoints = 20;
      for (int c = 0; c < checkpoints; ++c) {
        a = integrate(system, a, t_end / checkpoints, sopts);
        b = integrate(system, b, t_end / checkpoints, sopts);
        const double d = l1_distance(to_physical(a, 1.0), to_physical(b, 1.0));
        max_ratio = std::max(max_ratio, d / d0);
      }
    }
    entry.max_ratio = max_ratio;
    report.pairs.push_back(entry);
    report.measured_l = std::max(report.measured_l, max_ratio);
  }
  return report;
}

}  // namespace hyperlim
