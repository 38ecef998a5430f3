#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hyperlim/kernels.hpp"
#include "hyperlim/quadrature.hpp"

using namespace hyperlim;

TEST_CASE("backward fundamental solution") {
  CHECK(fundamental_backward(1, 0.0, 0.5) == doctest::Approx(2.0));
  CHECK(fundamental_backward(1, -1e-12, 0.5) == 0.0);
  CHECK(fundamental_backward(7, -3.0, 0.3) == 0.0);
  // n = 1 is the plain exponential kernel
  CHECK(fundamental_backward(1, 1.0, 0.5) ==
        doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));

  SUBCASE("unit mass for several shapes") {
    for (long n : {1L, 3L, 5L, 40L, 200L}) {
      const double lambda = 0.5;
      const double hi = n * lambda + 40.0 * lambda * std::sqrt((double)n) + 50.0;
      const double mass = integrate_adaptive(
          [&](double x) { return fundamental_backward(n, x, lambda); }, 0.0,
          hi, 1e-13, 256);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  SUBCASE("log-space path agrees with the direct product") {
    // n just above and below the switch point
    const double a = fundamental_backward(30, 17.0, 0.6);
    const double b = fundamental_backward(31, 17.0, 0.6);
    // consecutive shapes obey g_{n+1}(x) = g_n(x) * (x/lambda) / n
    CHECK(b == doctest::Approx(a * (17.0 / 0.6) / 30.0).epsilon(1e-12));
  }
}

TEST_CASE("semidiscrete fundamental solution") {
  CHECK(fundamental_semidiscrete(0, 4.0, 0.5) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(fundamental_semidiscrete(-1, 4.0, 0.5) == 0.0);
  CHECK(fundamental_semidiscrete(0, 0.0, 0.5) == 1.0);
  CHECK(fundamental_semidiscrete(3, 0.0, 0.5) == 0.0);

  SUBCASE("unit total mass") {
    for (double t : {0.5, 4.0, 100.0}) {
      KahanSum sum;
      for (long n = 0; n <= 400; ++n)
        sum.add(fundamental_semidiscrete(n, t, 0.5));
      CHECK(sum.value() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("backward interaction closed form") {
  const KernelParams p{0.7, 0.3};
  CHECK(interaction_backward(1.0, p) == doctest::Approx(2.5).epsilon(1e-15));
  // right-continuous at zero: the flat branch applies
  CHECK(interaction_backward(0.0, p) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(interaction_backward(-1.0, p) ==
        doctest::Approx(2.5 * std::exp(-0.4 / 0.21)).epsilon(1e-15));
  CHECK_THROWS_AS(interaction_backward(0.0, KernelParams{0.3, 0.7}),
                  ParameterError);
}

TEST_CASE("backward interaction oracle agrees with the closed form") {
  // The n = 0 pairing of the two initial point masses is excluded from the
  // oracle sum; the closed form is the finite value of the remaining
  // series, including at offset zero.
  struct Probe {
    double lambda, mu, x0;
  };
  const Probe probes[] = {
      {0.7, 0.3, 5.0}, {0.7, 0.3, -1.0}, {0.7, 0.3, 0.0},
      {0.9, 0.1, 0.0}, {0.9, 0.1, -3.0}, {0.9, 0.1, 1.0},
      {0.55, 0.45, 0.0},
  };
  for (const auto& pr : probes) {
    CAPTURE(pr.lambda);
    CAPTURE(pr.mu);
    CAPTURE(pr.x0);
    const KernelParams p{pr.lambda, pr.mu};
    const double closed = interaction_backward(pr.x0, p);
    const double oracle = interaction_backward_oracle(pr.x0, p);
    CHECK(std::abs(closed - oracle) / closed < 1e-6);
  }
  CHECK(interaction_backward_oracle(0.0, KernelParams{0.9, 0.1}) ==
        doctest::Approx(1.25).epsilon(1e-6));
  // a hopeless truncation cap must be reported, not silently accepted
  CHECK_THROWS_AS(interaction_backward_oracle(0.0, KernelParams{0.55, 0.45}, 50),
                  TruncationError);
}

TEST_CASE("semidiscrete interaction closed form") {
  const KernelParams p{0.7, 0.3};
  CHECK(interaction_semidiscrete(2, p) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(interaction_semidiscrete(0, p) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(interaction_semidiscrete(-1, p) ==
        doctest::Approx(2.5 * 3.0 / 7.0).epsilon(1e-14));
  // geometric decay with ratio mu/lambda towards -infinity
  for (long n0 = -2; n0 > -8; --n0)
    CHECK(interaction_semidiscrete(n0 - 1, p) / interaction_semidiscrete(n0, p) ==
          doctest::Approx(0.3 / 0.7).epsilon(1e-12));
}

TEST_CASE("semidiscrete interaction oracle agrees with the closed form") {
  struct Probe {
    double lambda, mu;
    long n0;
  };
  const Probe probes[] = {
      {0.7, 0.3, 0}, {0.7, 0.3, -2}, {0.7, 0.3, 5},
      {0.9, 0.1, -1}, {0.9, 0.1, 1},
  };
  for (const auto& pr : probes) {
    CAPTURE(pr.lambda);
    CAPTURE(pr.mu);
    CAPTURE(pr.n0);
    const KernelParams p{pr.lambda, pr.mu};
    const double closed = interaction_semidiscrete(pr.n0, p);
    const double oracle = interaction_semidiscrete_oracle(pr.n0, p);
    CHECK(std::abs(closed - oracle) / closed < 1e-6);
  }
  CHECK(interaction_semidiscrete_oracle(-2, KernelParams{0.7, 0.3}) ==
        doctest::Approx(2.5 * 9.0 / 49.0).epsilon(1e-6));
  CHECK_THROWS_AS(
      interaction_semidiscrete_oracle(0, KernelParams{0.55, 0.45}, 10.0),
      TruncationError);
}

TEST_CASE("interaction weights") {
  SUBCASE("backward") {
    CHECK(weight_backward(3.0, 0.2, 0.7) == doctest::Approx(5.0));
    CHECK(weight_backward(0.0, 0.2, 0.7) == doctest::Approx(5.0));
    CHECK(weight_backward(-1.0, 0.2, 0.7) ==
          doctest::Approx(5.0 * std::exp(-0.2 / 0.35)).epsilon(1e-15));
    CHECK_THROWS_AS(weight_backward(0.0, 0.7, 0.2), ParameterError);
    // nondecreasing and bounded by the flat value
    double prev = 0.0;
    for (double x = -8.0; x <= 2.0; x += 0.25) {
      const double w = weight_backward(x, 0.2, 0.7);
      CHECK(w >= prev);
      CHECK(w <= 5.0 + 1e-15);
      prev = w;
    }
  }
  SUBCASE("semidiscrete") {
    CHECK(weight_semidiscrete(0, 0.2, 0.7) == doctest::Approx(5.0));
    CHECK(weight_semidiscrete(-1, 0.2, 0.7) ==
          doctest::Approx(35.0 / 9.0).epsilon(1e-15));
    for (long k = -2; k > -9; --k)
      CHECK(weight_semidiscrete(k - 1, 0.2, 0.7) /
                weight_semidiscrete(k, 0.2, 0.7) ==
            doctest::Approx(1.0 / (1.0 + 0.2 / 0.7)).epsilon(1e-13));
    CHECK_THROWS_AS(weight_semidiscrete(0, 0.7, 0.2), ParameterError);
  }
}
