#ifndef HYPERLIM_QUADRATURE_HPP
#define HYPERLIM_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <functional>

namespace hyperlim {

/// 5-point Gauss-Legendre rule on [0,1]; exact for polynomials up to
/// degree 9.
struct GaussLegendre5 {
  static constexpr std::array<double, 5> nodes = {
      0.5 - 0.5 * 0.9061798459386640, 0.5 - 0.5 * 0.5384693101056831, 0.5,
      0.5 + 0.5 * 0.5384693101056831, 0.5 + 0.5 * 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {
      0.5 * 0.2369268850561891, 0.5 * 0.4786286704993665,
      0.5 * 0.5688888888888889, 0.5 * 0.4786286704993665,
      0.5 * 0.2369268850561891};
};

/// Adaptive Simpson integration of f over [a, b].
///
/// The interval is first cut into `bootstrap` uniform panels so that a
/// narrow bump inside a wide interval is not missed, then each panel is
/// refined recursively until the local Richardson estimate is below the
/// proportional share of `tol`.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int bootstrap = 32,
                          int max_depth = 48);

/// Running compensated (Kahan) sum.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

/// log(n!) with an internal cached table; safe for any n >= 0.
double log_factorial(long n);

}  // namespace hyperlim

#endif  // HYPERLIM_QUADRATURE_HPP
