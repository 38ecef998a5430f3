#ifndef HYPERLIM_STATE_HPP
#define HYPERLIM_STATE_HPP

#include <optional>
#include <span>
#include <vector>

#include "hyperlim/linalg.hpp"

namespace hyperlim {

/// Sampled state profile on a uniform grid, with a constant inflow value to
/// the left of the first node. Node j holds the state at x_min + j*dx,
/// stored node-major.
struct GridFunction {
  double x_min = 0.0;
  double dx = 0.0;
  int dim = 0;
  std::vector<double> values;
  Vec left_state;

  int size() const { return dim == 0 ? 0 : static_cast<int>(values.size()) / dim; }
  double x(int j) const { return x_min + j * dx; }
  double x_max() const { return x(size() - 1); }

  std::span<const double> at(int j) const {
    return {values.data() + static_cast<size_t>(j) * dim,
            static_cast<size_t>(dim)};
  }
  std::span<double> at(int j) {
    return {values.data() + static_cast<size_t>(j) * dim,
            static_cast<size_t>(dim)};
  }

  bool same_grid(const GridFunction& other, double tol = 1e-12) const {
    return dim == other.dim && size() == other.size() &&
           std::abs(x_min - other.x_min) <= tol &&
           std::abs(dx - other.dx) <= tol;
  }

  static GridFunction constant(double x_min, double dx, int nodes,
                               const Vec& value) {
    GridFunction g;
    g.x_min = x_min;
    g.dx = dx;
    g.dim = static_cast<int>(value.size());
    g.left_state = value;
    g.values.resize(static_cast<size_t>(nodes) * g.dim);
    for (int j = 0; j < nodes; ++j)
      for (int k = 0; k < g.dim; ++k) g.values[j * g.dim + k] = value[k];
    return g;
  }
};

/// One recorded step of the backward iteration: the pair (u_n, u_{n-1})
/// that the interaction functionals consume. `previous` is absent at n = 0.
struct BackwardRunState {
  long step_index = 0;
  GridFunction profile;
  std::optional<GridFunction> previous;
};

/// Finite window of lattice cells with a constant ghost state to the left;
/// cell k (k in [n_min, n_min+count)) holds u_k(t).
struct LatticeState {
  long n_min = 0;
  int dim = 0;
  std::vector<double> cells;
  Vec left_state;
  double time = 0.0;

  int size() const { return dim == 0 ? 0 : static_cast<int>(cells.size()) / dim; }

  std::span<const double> at(int k) const {
    return {cells.data() + static_cast<size_t>(k) * dim,
            static_cast<size_t>(dim)};
  }
  std::span<double> at(int k) {
    return {cells.data() + static_cast<size_t>(k) * dim,
            static_cast<size_t>(dim)};
  }

  static LatticeState constant(long n_min, int count, const Vec& value) {
    LatticeState s;
    s.n_min = n_min;
    s.dim = static_cast<int>(value.size());
    s.left_state = value;
    s.cells.resize(static_cast<size_t>(count) * s.dim);
    for (int k = 0; k < count; ++k)
      for (int c = 0; c < s.dim; ++c) s.cells[k * s.dim + c] = value[c];
    return s;
  }
};

/// Total variation of the raw sampled values, Sum_j |u_{j+1} - u_j|_1,
/// including the jump from the left ghost state to the first entry.
double total_variation(const GridFunction& g);
double total_variation(const LatticeState& s);

/// Integral of (u - left_state) over the grid (rectangle rule, one cell of
/// width dx per node). Conserved by the schemes when all variation stays
/// inside the window.
Vec mass_above_left(const GridFunction& g);
Vec mass_above_left(const LatticeState& s);

}  // namespace hyperlim

#endif  // HYPERLIM_STATE_HPP
