#include "hyperlim/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace hyperlim {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int bootstrap, int max_depth) {
  if (!(b > a)) return 0.0;
  if (bootstrap < 1) bootstrap = 1;
  const double h = (b - a) / bootstrap;
  KahanSum total;
  double x0 = a;
  double f0 = f(x0);
  for (int p = 0; p < bootstrap; ++p) {
    const double x1 = (p + 1 == bootstrap) ? b : a + (p + 1) * h;
    const double f1 = f(x1);
    const double xm = 0.5 * (x0 + x1);
    const double fm = f(xm);
    const double whole = simpson(f, x0, f0, x1, f1, xm, fm);
    total.add(
        adapt(f, x0, f0, x1, f1, xm, fm, whole, tol / bootstrap, max_depth));
    x0 = x1;
    f0 = f1;
  }
  return total.value();
}

double log_factorial(long n) {
  if (n < 2) return 0.0;
  constexpr long kCached = 1 << 16;
  static std::vector<double> table;
  static std::once_flag once;
  std::call_once(once, [] {
    table.resize(kCached);
    table[0] = table[1] = 0.0;
    for (long k = 2; k < kCached; ++k)
      table[k] = table[k - 1] + std::log(static_cast<double>(k));
  });
  if (n < kCached) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace hyperlim
