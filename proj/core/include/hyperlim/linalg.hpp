#ifndef HYPERLIM_LINALG_HPP
#define HYPERLIM_LINALG_HPP

#include <cmath>
#include <span>
#include <vector>

#include "hyperlim/errors.hpp"

namespace hyperlim {

using Vec = std::vector<double>;

/// Small dense square matrix, row major. Sized for state dimensions of a
/// conservation-law system (typically 1..4), not for large linear algebra.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int n) : n(n), a(static_cast<size_t>(n) * n, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * n + j];
  }

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  void apply(std::span<const double> x, std::span<double> out) const {
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * x[j];
      out[i] = s;
    }
  }

  Vec apply(std::span<const double> x) const {
    Vec out(n);
    apply(x, out);
    return out;
  }

  /// max row sum (operator infinity norm)
  double inf_norm() const {
    double best = 0;
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += std::abs((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm1(std::span<const double> a) {
  double s = 0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline double norm_inf(std::span<const double> a) {
  double s = 0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

/// Solves A x = b in place by LU with partial pivoting. Throws on a
/// numerically singular pivot.
void solve_inplace(Mat a, std::span<double> b);

inline Vec solve(const Mat& a, Vec b) {
  solve_inplace(a, b);
  return b;
}

/// Inverse via column-by-column solves. For diagnostics, not hot paths.
Mat inverse(const Mat& a);

}  // namespace hyperlim

#endif  // HYPERLIM_LINALG_HPP
