#include "hyperlim/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "hyperlim/quadrature.hpp"

namespace hyperlim {

namespace {

constexpr long kDirectTermLimit = 30;  // switch to log space above this

double log_gamma_density(long n, double x, double lambda) {
  // log of (1/lambda) (x/lambda)^{n-1} e^{-x/lambda} / (n-1)!
  return -std::log(lambda) + (n - 1) * std::log(x / lambda) - x / lambda -
         log_factorial(n - 1);
}

/// Upper-tail Chernoff bound P(Gamma(n, theta) >= a), a > n*theta.
double gamma_upper_tail(long n, double theta, double a) {
  const double r = a / (n * theta);
  if (r <= 1.0) return 1.0;
  return std::exp(n * (std::log(r) + 1.0 - r));
}

/// Lower-tail Chernoff bound P(Gamma(n, theta) <= a), a < n*theta.
double gamma_lower_tail(long n, double theta, double a) {
  if (a <= 0.0) return 0.0;
  const double r = a / (n * theta);
  if (r >= 1.0) return 1.0;
  return std::exp(n * (std::log(r) + 1.0 - r));
}

double gamma_density_sup(long n, double theta) {
  if (n == 1) return 1.0 / theta;
  // mode (n-1)theta; Stirling-level bound on the peak value
  return std::exp(log_gamma_density(n, (n - 1) * theta, theta));
}

}  // namespace

double fundamental_backward(long n, double x, double lambda) {
  if (n < 1) throw ParameterError("fundamental_backward: n must be >= 1");
  if (!(lambda > 0))
    throw ParameterError("fundamental_backward: lambda must be positive");
  if (x < 0) return 0.0;
  if (x == 0.0) return n == 1 ? 1.0 / lambda : 0.0;
  if (n <= kDirectTermLimit) {
    double p = 1.0 / lambda;
    for (long k = 1; k < n; ++k) p *= (x / lambda) / k;
    return p * std::exp(-x / lambda);
  }
  return std::exp(log_gamma_density(n, x, lambda));
}

double fundamental_semidiscrete(long n, double t, double lambda) {
  if (t < 0) throw ParameterError("fundamental_semidiscrete: t must be >= 0");
  if (!(lambda > 0))
    throw ParameterError("fundamental_semidiscrete: lambda must be positive");
  if (n < 0) return 0.0;
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const double rate = lambda * t;
  if (n <= kDirectTermLimit && rate < 500.0) {
    double p = std::exp(-rate);
    for (long k = 1; k <= n; ++k) p *= rate / k;
    return p;
  }
  return std::exp(-rate + n * std::log(rate) - log_factorial(n));
}

double interaction_backward(double x0, const KernelParams& params) {
  params.validate();
  const double gap = params.lambda - params.mu;
  if (x0 >= 0) return 1.0 / gap;
  return std::exp(gap / (params.lambda * params.mu) * x0) / gap;
}

double interaction_backward_oracle(double x0, const KernelParams& params,
                                   long n_max) {
  params.validate();
  const double lambda = params.lambda;
  const double mu = params.mu;
  KahanSum sum;
  double prev_bound = 0.0;
  for (long n = 1; n <= n_max; ++n) {
    // supports: fast kernel on [0, inf), slow kernel on [x0, inf)
    const double lo = std::max(0.0, x0);
    const double cv = n * lambda, sv = std::sqrt(double(n)) * lambda;
    const double cz = x0 + n * mu, sz = std::sqrt(double(n)) * mu;
    const double hi =
        std::min(cv + 14.0 * sv + 40.0 * lambda, cz + 14.0 * sz + 40.0 * mu);
    double term = 0.0;
    if (hi > lo) {
      auto integrand = [&](double x) {
        return fundamental_backward(n, x, lambda) *
               fundamental_backward(n, x - x0, mu);
      };
      term = integrate_adaptive(integrand, lo, hi, 1e-12, 48);
    }
    sum.add(term);
    // Once the kernel centers are well separated, every term is bounded by
    // the Chernoff overlap at the midpoint; the bounds decay geometrically,
    // so the remaining tail is bound_n * q / (1 - q) with q the observed
    // bound ratio.
    if (n * (lambda - mu) > std::abs(x0) + 6.0 * (sv + sz)) {
      const double mid = 0.5 * (cv + cz);
      const double bound =
          gamma_density_sup(n, mu) * gamma_lower_tail(n, lambda, mid) +
          gamma_density_sup(n, lambda) * gamma_upper_tail(n, mu, mid - x0);
      if (prev_bound > 0.0 && bound < prev_bound) {
        const double q = bound / prev_bound;
        const double tail = bound * q / (1.0 - q);
        if (tail < 1e-10) return sum.value();
      }
      prev_bound = bound;
    }
  }
  throw TruncationError(
      "interaction_backward_oracle: tail bound not met within n_max");
}

double interaction_semidiscrete(long n0, const KernelParams& params) {
  params.validate();
  const double gap = params.lambda - params.mu;
  if (n0 >= 0) return 1.0 / gap;
  return std::pow(params.lambda / params.mu, static_cast<double>(n0)) / gap;
}

double interaction_semidiscrete_oracle(long n0, const KernelParams& params,
                                       double t_max) {
  params.validate();
  const double lambda = params.lambda;
  const double mu = params.mu;
  // The summed overlap decays like exp(-(sqrt(lambda)-sqrt(mu))^2 t); the
  // naive rate min(lambda, mu) badly underestimates the needed horizon for
  // close speeds.
  const double decay =
      (std::sqrt(lambda) - std::sqrt(mu)) * (std::sqrt(lambda) - std::sqrt(mu));
  const double needed = (26.0 + std::abs(static_cast<double>(n0))) / decay;
  if (t_max <= 0.0) {
    t_max = needed;
  } else if (t_max < needed) {
    throw TruncationError(
        "interaction_semidiscrete_oracle: t_max too small for the overlap "
        "tail bound");
  }
  auto summed_overlap = [&](double t) {
    if (t == 0.0) return n0 == 0 ? 1.0 : 0.0;
    // Window of cells where both Poisson masses are non-negligible.
    const double lo_c = std::max(0.0, mu * t + n0 - 14.0 * std::sqrt(mu * t + 4.0));
    const double hi_c = lambda * t + 14.0 * std::sqrt(lambda * t + 4.0);
    const long lo = std::max<long>(std::max<long>(0, n0),
                                   static_cast<long>(std::floor(lo_c)));
    const long hi = static_cast<long>(std::ceil(hi_c));
    const double log_lt = std::log(lambda * t);
    const double log_mt = std::log(mu * t);
    KahanSum s;
    for (long k = lo; k <= hi; ++k) {
      const double lp = -(lambda + mu) * t + k * log_lt - log_factorial(k) +
                        (k - n0) * log_mt - log_factorial(k - n0);
      if (lp > -745.0) s.add(std::exp(lp));
    }
    return s.value();
  };
  return integrate_adaptive(summed_overlap, 0.0, t_max, 1e-10,
                            std::max(64, static_cast<int>(t_max / 4.0)));
}

double weight_backward(double x, double separation, double speed_cap) {
  if (!(separation > 0) || !(speed_cap > 0) || separation >= speed_cap)
    throw ParameterError("weight_backward requires 0 < separation < speed cap");
  const double c = separation, cap = speed_cap;
  if (x >= 0) return 1.0 / c;
  return std::exp(c / (cap * (cap - c)) * x) / c;
}

double weight_backward(double x, const SystemSpec& system) {
  return weight_backward(x, system.separation, system.speed_cap);
}

double weight_semidiscrete(long k, double separation, double speed_cap) {
  if (!(separation > 0) || !(speed_cap > 0) || separation >= speed_cap)
    throw ParameterError(
        "weight_semidiscrete requires 0 < separation < speed cap");
  const double c = separation, cap = speed_cap;
  if (k >= 0) return 1.0 / c;
  return std::pow(1.0 + c / cap, static_cast<double>(k)) / c;
}

double weight_semidiscrete(long k, const SystemSpec& system) {
  return weight_semidiscrete(k, system.separation, system.speed_cap);
}

}  // namespace hyperlim
