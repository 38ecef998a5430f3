#include "hyperlim/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hyperlim {

void solve_inplace(Mat a, std::span<double> b) {
  const int n = a.n;
  if (n == 1) {
    if (a(0, 0) == 0.0) throw Error("singular 1x1 system");
    b[0] /= a(0, 0);
    return;
  }
  if (n == 2) {
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (det == 0.0) throw Error("singular 2x2 system");
    const double x0 = (b[0] * a(1, 1) - a(0, 1) * b[1]) / det;
    const double x1 = (a(0, 0) * b[1] - b[0] * a(1, 0)) / det;
    b[0] = x0;
    b[1] = x1;
    return;
  }
  // LU with partial pivoting, in place.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) throw Error("singular linear system");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double m = a(r, col) / a(col, col);
      a(r, col) = 0.0;
      for (int j = col + 1; j < n; ++j) a(r, j) -= m * a(col, j);
      b[r] -= m * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= a(r, j) * b[j];
    b[r] = s / a(r, r);
  }
}

Mat inverse(const Mat& a) {
  const int n = a.n;
  Mat inv(n);
  Vec col(n);
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    solve_inplace(a, col);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

}  // namespace hyperlim
