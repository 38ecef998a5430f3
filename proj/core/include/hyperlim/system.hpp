#ifndef HYPERLIM_SYSTEM_HPP
#define HYPERLIM_SYSTEM_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyperlim/linalg.hpp"

namespace hyperlim {

/// Axis-aligned box of admissible states.
struct Box {
  Vec lo;
  Vec hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> u, double slack = 0.0) const {
    for (size_t k = 0; k < lo.size(); ++k)
      if (u[k] < lo[k] - slack || u[k] > hi[k] + slack) return false;
    return true;
  }
  double diameter() const {
    double d = 0;
    for (size_t k = 0; k < lo.size(); ++k) d = std::max(d, hi[k] - lo[k]);
    return d;
  }
};

using FluxFn = std::function<void(std::span<const double>, std::span<double>)>;
using JacobianFn = std::function<void(std::span<const double>, Mat&)>;

/// A 1-D system of conservation laws u_t + f(u)_x = 0 together with the
/// standing assumptions the two singular approximations rely on: all
/// characteristic speeds inside (0, 1) and uniformly separated over an
/// enlarged compact box of states.
///
/// kappa, speed_cap and separation are estimated by dense sampling of the
/// enlarged box at construction; construction fails if the sampled
/// eigenvalues are not real, not in (0,1), or not separated.
struct SystemSpec {
  std::string name;
  int dimension = 0;
  FluxFn flux;
  JacobianFn jacobian;
  Box state_box;          ///< admissible base states
  double margin = 0.0;    ///< enlargement of state_box on every side
  double kappa = 0.0;     ///< lower bound on all speeds over the enlarged box
  double speed_cap = 0.0; ///< upper bound on all speeds, < 1
  double separation = 0.0;      ///< lower bound on consecutive speed gaps
  double max_inverse_norm = 0.0;///< sup of ||A(u)^{-1}||_inf over samples
  bool constant_jacobian = false;

  Box enlarged_box() const {
    Box b = state_box;
    for (size_t k = 0; k < b.lo.size(); ++k) {
      b.lo[k] -= margin;
      b.hi[k] += margin;
    }
    return b;
  }
  bool in_enlarged_box(std::span<const double> u) const {
    return state_box.contains(u, margin);
  }

  void flux_at(std::span<const double> u, std::span<double> out) const {
    flux(u, out);
  }
  void jacobian_at(std::span<const double> u, Mat& out) const {
    jacobian(u, out);
  }
};

/// Eigen-structure of a Jacobian (or averaged Jacobian): ascending
/// eigenvalues, unit right eigenvectors as columns of `right`, and the
/// biorthogonal left rows in `left` (left = right^{-1}).
///
/// Orientation is fixed so that the first component of each right
/// eigenvector with magnitude above 1e-8 is positive, which makes the
/// decomposition deterministic.
struct SpectralData {
  Vec eigenvalues;
  Mat right;
  Mat left;

  int dimension() const { return static_cast<int>(eigenvalues.size()); }
  /// i-th right eigenvector (column i of `right`) copied out.
  Vec right_vector(int i) const {
    Vec r(right.n);
    for (int k = 0; k < right.n; ++k) r[k] = right(k, i);
    return r;
  }
  /// i-th left covector (row i of `left`) as a span.
  std::span<const double> left_row(int i) const {
    return {left.a.data() + static_cast<size_t>(i) * left.n,
            static_cast<size_t>(left.n)};
  }
  double left_dot(int i, std::span<const double> w) const {
    return dot(left_row(i), w);
  }
};

/// Spectral decomposition of A(u) = Df(u) at a state inside the enlarged
/// box. Throws DomainError outside the box and HyperbolicityError when the
/// eigenvalues are not real or their gaps fall below the system separation.
SpectralData eigen_decompose(const SystemSpec& system,
                             std::span<const double> state);

/// Spectral decomposition of the path-averaged Jacobian
/// int_0^1 Df(left + (right-left) s) ds, evaluated by 5-point
/// Gauss-Legendre quadrature. Reduces to eigen_decompose for a degenerate
/// segment.
SpectralData averaged_jacobian(const SystemSpec& system,
                               std::span<const double> left_state,
                               std::span<const double> right_state);

/// Fills `out` with the path-averaged Jacobian matrix itself.
void averaged_jacobian_matrix(const SystemSpec& system,
                              std::span<const double> left_state,
                              std::span<const double> right_state, Mat& out);

/// Central finite-difference estimate of the self-directional derivative of
/// each eigenvector field: max over sampled states and families of
/// |(r_i(u + step r_i) - r_i(u - step r_i)) / (2 step)|_inf.
/// Straight-line systems return a defect at rounding level.
double verify_straight_line(const SystemSpec& system, int sample_count,
                            double step);

/// Builders for the shipped test systems.

/// Constant diagonal Jacobian with the given ascending speeds in (0,1).
SystemSpec make_linear_system(const Vec& eigenvalues,
                              const Box* box_override = nullptr,
                              double margin = 0.1);

/// Scalar flux f(u) = 0.5 u + 0.25 u^2 on [-0.4, 0.4]; speeds in [0.3, 0.7].
SystemSpec make_shifted_burgers(const Box* box_override = nullptr,
                                double margin = 0.05);

/// Two-component Langmuir exchange flux f_i = u_i / (1 + u_1 + u_2) on
/// [0.5, 1.5]^2. Both eigenvector fields satisfy the straight-line
/// condition.
SystemSpec make_chromatography(const Box* box_override = nullptr,
                               double margin = 0.05);

/// Build a user system from a flux alone; the Jacobian is formed by
/// 4th-order central differences with step 1e-5 * box diameter.
SystemSpec make_system_from_flux(const std::string& name, int dimension,
                                 FluxFn flux, const Box& box, double margin);

}  // namespace hyperlim

#endif  // HYPERLIM_SYSTEM_HPP
