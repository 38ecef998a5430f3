#include "hyperlim/system.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "hyperlim/errors.hpp"
#include "hyperlim/quadrature.hpp"

namespace hyperlim {

namespace {

constexpr double kSignThreshold = 1e-8;

void fix_sign(Vec& v) {
  for (double c : v) {
    if (std::abs(c) > kSignThreshold) {
      if (c < 0)
        for (double& x : v) x = -x;
      return;
    }
  }
}

void normalize(Vec& v) {
  double s = norm2(v);
  if (s == 0) throw HyperbolicityError("zero eigenvector");
  for (double& x : v) x /= s;
}

/// Eigenvalues and unit sign-fixed right eigenvectors of a small real
/// matrix, ascending. Closed forms for n <= 2, QR (via Eigen) above.
void eigen_system(const Mat& a, Vec& lambdas, std::vector<Vec>& rights) {
  const int n = a.n;
  lambdas.assign(n, 0.0);
  rights.assign(n, Vec(n, 0.0));
  if (n == 1) {
    lambdas[0] = a(0, 0);
    rights[0][0] = 1.0;
    return;
  }
  if (n == 2) {
    const double tr = a(0, 0) + a(1, 1);
    const double diff = a(0, 0) - a(1, 1);
    const double disc2 = diff * diff + 4.0 * a(0, 1) * a(1, 0);
    if (disc2 < 0)
      throw HyperbolicityError("complex eigenvalue pair in 2x2 Jacobian");
    const double disc = std::sqrt(disc2);
    lambdas[0] = 0.5 * (tr - disc);
    lambdas[1] = 0.5 * (tr + disc);
    for (int i = 0; i < 2; ++i) {
      // pick the numerically larger of the two null-space expressions
      Vec v1{a(0, 1), lambdas[i] - a(0, 0)};
      Vec v2{lambdas[i] - a(1, 1), a(1, 0)};
      Vec& v = (std::abs(v1[0]) + std::abs(v1[1]) >=
                std::abs(v2[0]) + std::abs(v2[1]))
                   ? v1
                   : v2;
      if (std::abs(v[0]) + std::abs(v[1]) == 0.0) v = {i == 0 ? 1.0 : 0.0,
                                                       i == 0 ? 0.0 : 1.0};
      normalize(v);
      fix_sign(v);
      rights[i] = v;
    }
    return;
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw HyperbolicityError("eigenvalue iteration failed to converge");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(solver.eigenvalues()(i).imag()) > 1e-10 * scale)
      throw HyperbolicityError("complex eigenvalue in Jacobian");
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](int p, int q) {
    return solver.eigenvalues()(p).real() < solver.eigenvalues()(q).real();
  });
  for (int i = 0; i < n; ++i) {
    lambdas[i] = solver.eigenvalues()(order[i]).real();
    Vec v(n);
    for (int k = 0; k < n; ++k)
      v[k] = solver.eigenvectors().col(order[i])(k).real();
    normalize(v);
    fix_sign(v);
    rights[i] = v;
  }
}

Vec eigenvalues_of(const Mat& a) {
  Vec lambdas;
  std::vector<Vec> rights;
  eigen_system(a, lambdas, rights);
  return lambdas;
}

SpectralData assemble(const SystemSpec& system, const Mat& a) {
  SpectralData s;
  std::vector<Vec> rights;
  eigen_system(a, s.eigenvalues, rights);
  const int n = a.n;
  for (int i = 0; i + 1 < n; ++i) {
    if (s.eigenvalues[i + 1] - s.eigenvalues[i] < system.separation)
      throw HyperbolicityError("eigenvalue gap below the system separation");
  }
  s.right = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) s.right(k, i) = rights[i][k];
  s.left = inverse(s.right);
  return s;
}

void check_in_enlarged_box(const SystemSpec& system,
                           std::span<const double> state, const char* who) {
  if (!system.in_enlarged_box(state))
    throw DomainError(std::string(who) + ": state outside the enlarged box");
}

/// Regular grid over the enlarged box with roughly `budget` points total.
std::vector<Vec> sample_box(const Box& box, int budget) {
  const int n = box.dimension();
  int per_dim = std::max(
      2, static_cast<int>(std::ceil(std::pow(static_cast<double>(budget),
                                             1.0 / n))));
  std::vector<Vec> samples;
  Vec u(n);
  std::vector<int> idx(n, 0);
  for (;;) {
    for (int k = 0; k < n; ++k) {
      const double t = static_cast<double>(idx[k]) / (per_dim - 1);
      u[k] = box.lo[k] + t * (box.hi[k] - box.lo[k]);
    }
    samples.push_back(u);
    int k = 0;
    while (k < n && ++idx[k] == per_dim) idx[k++] = 0;
    if (k == n) break;
  }
  return samples;
}

/// Estimates kappa, speed_cap, separation and the inverse-norm bound by
/// dense sampling; fails construction on any violated standing assumption.
void finalize_system(SystemSpec& system, int budget = 10000) {
  const Box k1 = system.enlarged_box();
  const auto samples =
      system.constant_jacobian ? std::vector<Vec>{k1.lo} : sample_box(k1, budget);
  double min_l = 1e300, max_l = -1e300, min_gap = 1e300, max_inv = 0.0;
  Mat a(system.dimension);
  for (const auto& u : samples) {
    system.jacobian_at(u, a);
    Vec lambdas = eigenvalues_of(a);
    for (int i = 0; i < system.dimension; ++i) {
      min_l = std::min(min_l, lambdas[i]);
      max_l = std::max(max_l, lambdas[i]);
      if (i + 1 < system.dimension)
        min_gap = std::min(min_gap, lambdas[i + 1] - lambdas[i]);
    }
    max_inv = std::max(max_inv, inverse(a).inf_norm());
  }
  if (!(min_l > 0.0))
    throw HyperbolicityError(system.name +
                             ": sampled eigenvalue not positive");
  if (!(max_l < 1.0))
    throw HyperbolicityError(system.name + ": sampled eigenvalue not below 1");
  if (system.dimension > 1 && !(min_gap > 0.0))
    throw HyperbolicityError(system.name + ": sampled eigenvalues not separated");
  if (system.constant_jacobian) {
    system.kappa = min_l;
    system.speed_cap = max_l;
    system.separation = system.dimension > 1 ? min_gap : max_l;
  } else {
    // The sampled extremes bracket the true ones only up to grid
    // resolution; pad them so states between samples stay admissible.
    system.kappa = 0.95 * min_l;
    system.speed_cap = std::min(1.02 * max_l, 0.5 * (1.0 + max_l));
    system.separation =
        system.dimension > 1 ? 0.95 * min_gap : system.speed_cap;
  }
  system.max_inverse_norm = max_inv;
}

JacobianFn central_difference_jacobian(FluxFn flux, int n, double h) {
  return [flux, n, h](std::span<const double> u, Mat& out) {
    if (out.n != n) out = Mat(n);
    Vec up(u.begin(), u.end());
    Vec f1(n), f2(n), f3(n), f4(n);
    for (int k = 0; k < n; ++k) {
      const double saved = up[k];
      up[k] = saved + 2 * h;
      flux(up, f1);
      up[k] = saved + h;
      flux(up, f2);
      up[k] = saved - h;
      flux(up, f3);
      up[k] = saved - 2 * h;
      flux(up, f4);
      up[k] = saved;
      for (int i = 0; i < n; ++i)
        out(i, k) = (-f1[i] + 8 * f2[i] - 8 * f3[i] + f4[i]) / (12 * h);
    }
  };
}

}  // namespace

SpectralData eigen_decompose(const SystemSpec& system,
                             std::span<const double> state) {
  check_in_enlarged_box(system, state, "eigen_decompose");
  Mat a(system.dimension);
  system.jacobian_at(state, a);
  return assemble(system, a);
}

void averaged_jacobian_matrix(const SystemSpec& system,
                              std::span<const double> left_state,
                              std::span<const double> right_state, Mat& out) {
  const int n = system.dimension;
  if (out.n != n) out = Mat(n);
  std::fill(out.a.begin(), out.a.end(), 0.0);
  Vec u(n);
  Mat a(n);
  for (size_t q = 0; q < GaussLegendre5::nodes.size(); ++q) {
    const double s = GaussLegendre5::nodes[q];
    for (int k = 0; k < n; ++k)
      u[k] = left_state[k] + (right_state[k] - left_state[k]) * s;
    system.jacobian_at(u, a);
    const double w = GaussLegendre5::weights[q];
    for (size_t e = 0; e < out.a.size(); ++e) out.a[e] += w * a.a[e];
  }
}

SpectralData averaged_jacobian(const SystemSpec& system,
                               std::span<const double> left_state,
                               std::span<const double> right_state) {
  // The boxes are convex, so segment admissibility follows from the
  // endpoints.
  check_in_enlarged_box(system, left_state, "averaged_jacobian");
  check_in_enlarged_box(system, right_state, "averaged_jacobian");
  Mat a(system.dimension);
  averaged_jacobian_matrix(system, left_state, right_state, a);
  return assemble(system, a);
}

double verify_straight_line(const SystemSpec& system, int sample_count,
                            double step) {
  if (sample_count < 1)
    throw PreconditionError("verify_straight_line: sample_count must be >= 1");
  std::mt19937_64 rng(0x5b1a2c3d4e5f6071ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = system.dimension;
  double worst = 0.0;
  Vec u(n), up(n), um(n);
  for (int s = 0; s < sample_count; ++s) {
    for (int k = 0; k < n; ++k)
      u[k] = system.state_box.lo[k] +
             unit(rng) * (system.state_box.hi[k] - system.state_box.lo[k]);
    const SpectralData base = eigen_decompose(system, u);
    for (int i = 0; i < n; ++i) {
      const Vec r = base.right_vector(i);
      for (int k = 0; k < n; ++k) {
        up[k] = u[k] + step * r[k];
        um[k] = u[k] - step * r[k];
      }
      if (!system.in_enlarged_box(up) || !system.in_enlarged_box(um))
        throw DomainError(
            "verify_straight_line: displaced sample left the enlarged box");
      const Vec rp = eigen_decompose(system, up).right_vector(i);
      const Vec rm = eigen_decompose(system, um).right_vector(i);
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, std::abs((rp[k] - rm[k]) / (2.0 * step)));
    }
  }
  return worst;
}

SystemSpec make_linear_system(const Vec& eigenvalues, const Box* box_override,
                              double margin) {
  const int n = static_cast<int>(eigenvalues.size());
  if (n < 1) throw ParameterError("linear system needs at least one speed");
  Vec speeds = eigenvalues;
  std::sort(speeds.begin(), speeds.end());
  SystemSpec s;
  s.name = "linear";
  s.dimension = n;
  s.constant_jacobian = true;
  s.flux = [speeds](std::span<const double> u, std::span<double> f) {
    for (size_t k = 0; k < speeds.size(); ++k) f[k] = speeds[k] * u[k];
  };
  s.jacobian = [speeds, n](std::span<const double>, Mat& a) {
    if (a.n != n) a = Mat(n);
    std::fill(a.a.begin(), a.a.end(), 0.0);
    for (int k = 0; k < n; ++k) a(k, k) = speeds[k];
  };
  if (box_override) {
    s.state_box = *box_override;
  } else {
    s.state_box.lo.assign(n, -1.0);
    s.state_box.hi.assign(n, 1.0);
  }
  s.margin = margin;
  finalize_system(s);
  return s;
}

SystemSpec make_shifted_burgers(const Box* box_override, double margin) {
  SystemSpec s;
  s.name = "burgers-shifted";
  s.dimension = 1;
  s.flux = [](std::span<const double> u, std::span<double> f) {
    f[0] = 0.5 * u[0] + 0.25 * u[0] * u[0];
  };
  s.jacobian = [](std::span<const double> u, Mat& a) {
    if (a.n != 1) a = Mat(1);
    a(0, 0) = 0.5 + 0.5 * u[0];
  };
  if (box_override) {
    s.state_box = *box_override;
  } else {
    s.state_box.lo = {-0.4};
    s.state_box.hi = {0.4};
  }
  s.margin = margin;
  finalize_system(s);
  return s;
}

SystemSpec make_chromatography(const Box* box_override, double margin) {
  SystemSpec s;
  s.name = "chromatography";
  s.dimension = 2;
  s.flux = [](std::span<const double> u, std::span<double> f) {
    const double denom = 1.0 + u[0] + u[1];
    f[0] = u[0] / denom;
    f[1] = u[1] / denom;
  };
  s.jacobian = [](std::span<const double> u, Mat& a) {
    if (a.n != 2) a = Mat(2);
    const double denom = 1.0 + u[0] + u[1];
    const double inv2 = 1.0 / (denom * denom);
    a(0, 0) = (1.0 + u[1]) * inv2;
    a(0, 1) = -u[0] * inv2;
    a(1, 0) = -u[1] * inv2;
    a(1, 1) = (1.0 + u[0]) * inv2;
  };
  if (box_override) {
    s.state_box = *box_override;
  } else {
    s.state_box.lo = {0.5, 0.5};
    s.state_box.hi = {1.5, 1.5};
  }
  s.margin = margin;
  finalize_system(s);
  return s;
}

SystemSpec make_system_from_flux(const std::string& name, int dimension,
                                 FluxFn flux, const Box& box, double margin) {
  SystemSpec s;
  s.name = name;
  s.dimension = dimension;
  s.flux = flux;
  s.state_box = box;
  s.margin = margin;
  const double h = 1e-5 * std::max(box.diameter(), 1e-30);
  s.jacobian = central_difference_jacobian(s.flux, dimension, h);
  finalize_system(s);
  return s;
}

}  // namespace hyperlim
