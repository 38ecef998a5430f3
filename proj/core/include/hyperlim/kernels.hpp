#ifndef HYPERLIM_KERNELS_HPP
#define HYPERLIM_KERNELS_HPP

#include "hyperlim/errors.hpp"
#include "hyperlim/system.hpp"

namespace hyperlim {

/// Speed pair for the two-equation interaction integrals; lambda is the
/// faster speed.
struct KernelParams {
  double lambda = 0.0;
  double mu = 0.0;

  void validate() const {
    if (!(lambda > mu && mu > 0.0))
      throw ParameterError("KernelParams requires lambda > mu > 0");
  }
};

/// Fundamental solution of the backward iteration of a single linear
/// equation at speed lambda, after n steps from unit point mass at x = 0:
/// the Gamma(n, lambda) density
///   (1/lambda) (x/lambda)^{n-1} e^{-x/lambda} / (n-1)!   for x >= 0,
/// and 0 for x < 0. Evaluated in log space for large n.
double fundamental_backward(long n, double x, double lambda);

/// Fundamental solution of the semi-discrete upwind lattice at speed
/// lambda started from cell 0: the Poisson(lambda t) mass at cell n,
///   (lambda t)^n e^{-lambda t} / n!   for n >= 0,
/// and 0 for n < 0. Evaluated in log space for large arguments.
double fundamental_semidiscrete(long n, double t, double lambda);

/// Total pairwise overlap of the two backward fundamental solutions with
/// speeds lambda > mu and initial offset x0 (slow kernel started at x0):
///   P(x0) = 1/(lambda-mu) * exp( (lambda-mu)/(lambda mu) * x0 )  for x0 < 0
///   P(x0) = 1/(lambda-mu)                                        for x0 >= 0
double interaction_backward(double x0, const KernelParams& params);

/// Brute-force check of interaction_backward: sums
/// integral of v_n(x) z_n(x) dx over n = 1..n_max by adaptive quadrature
/// (the n = 0 pairing of two point masses is excluded; the series value is
/// finite and matches the closed form). Throws TruncationError when the
/// tail estimate beyond n_max exceeds 1e-10.
double interaction_backward_oracle(double x0, const KernelParams& params,
                                   long n_max = 20000);

/// Lattice analogue at cell offset n0:
///   P(n0) = 1/(lambda-mu) * (lambda/mu)^{n0}   for n0 < 0
///   P(n0) = 1/(lambda-mu)                      for n0 >= 0
double interaction_semidiscrete(long n0, const KernelParams& params);

/// Brute-force check of interaction_semidiscrete:
/// integral over t of Sum_n Poisson(lambda t; n) Poisson(mu t; n - n0) dt,
/// adaptive in t with the inner sum truncated by Poisson tail bounds. If
/// t_max <= 0 a value giving overlap tail below 1e-10 is chosen from the
/// overlap decay rate (sqrt(lambda)-sqrt(mu))^2; throws TruncationError if
/// the supplied t_max cannot meet that bound.
double interaction_semidiscrete_oracle(long n0, const KernelParams& params,
                                       double t_max = 0.0);

/// Interaction weight for the backward potential, built from the system
/// constants c = separation and K = speed cap:
///   P0(x) = (1/c) exp( c/(K(K-c)) * x )  for x < 0,   1/c  for x >= 0.
/// Requires c < K.
double weight_backward(double x, double separation, double speed_cap);
double weight_backward(double x, const SystemSpec& system);

/// Lattice interaction weight:
///   P(k) = (1/c) (1 + c/K)^k  for k < 0,   1/c  for k >= 0.
/// Requires c < K.
double weight_semidiscrete(long k, double separation, double speed_cap);
double weight_semidiscrete(long k, const SystemSpec& system);

}  // namespace hyperlim

#endif  // HYPERLIM_KERNELS_HPP
