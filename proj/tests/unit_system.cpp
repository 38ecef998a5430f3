#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "hyperlim/system.hpp"

using namespace hyperlim;

namespace {

Vec random_state(const SystemSpec& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec u(s.dimension);
  const Box k1 = s.enlarged_box();
  for (int k = 0; k < s.dimension; ++k)
    u[k] = k1.lo[k] + unit(rng) * (k1.hi[k] - k1.lo[k]);
  return u;
}

double eigen_residual(const SystemSpec& sys, const Vec& u,
                      const SpectralData& sd) {
  Mat a(sys.dimension);
  sys.jacobian_at(u, a);
  double worst = 0;
  for (int i = 0; i < sys.dimension; ++i) {
    const Vec r = sd.right_vector(i);
    const Vec ar = a.apply(r);
    for (int k = 0; k < sys.dimension; ++k)
      worst = std::max(worst,
                       std::abs(ar[k] - sd.eigenvalues[i] * r[k]));
    // left residual l^i A = lambda_i l^i
    for (int k = 0; k < sys.dimension; ++k) {
      double la = 0;
      for (int j = 0; j < sys.dimension; ++j)
        la += sd.left_row(i)[j] * a(j, k);
      worst = std::max(worst,
                       std::abs(la - sd.eigenvalues[i] * sd.left_row(i)[k]));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("diagonal linear system decomposes into the standard basis") {
  const SystemSpec sys = make_linear_system({0.3, 0.7});
  const Vec u{0.2, -0.1};
  const SpectralData sd = eigen_decompose(sys, u);
  CHECK(sd.eigenvalues[0] == doctest::Approx(0.3));
  CHECK(sd.eigenvalues[1] == doctest::Approx(0.7));
  CHECK(sd.right(0, 0) == doctest::Approx(1.0));
  CHECK(sd.right(1, 0) == doctest::Approx(0.0));
  CHECK(sd.right(0, 1) == doctest::Approx(0.0));
  CHECK(sd.right(1, 1) == doctest::Approx(1.0));
  CHECK(sd.left(0, 0) == doctest::Approx(1.0));
  CHECK(sd.left(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("shifted Burgers speed at the origin") {
  const SystemSpec sys = make_shifted_burgers();
  const SpectralData sd = eigen_decompose(sys, Vec{0.0});
  CHECK(sd.eigenvalues[0] == doctest::Approx(0.5));
  CHECK(sys.kappa > 0.0);
  CHECK(sys.speed_cap < 1.0);
}

TEST_CASE("chromatography spectrum at (1,1)") {
  // By hand: the Jacobian at (1,1) is [[2/9, -1/9], [-1/9, 2/9]], whose
  // characteristic polynomial gives 1/9 and 1/3 with eigenvectors along
  // (1,1) and (1,-1).
  const SystemSpec sys = make_chromatography();
  const SpectralData sd = eigen_decompose(sys, Vec{1.0, 1.0});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(sd.eigenvalues[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
  CHECK(sd.eigenvalues[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(sd.right(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-13));
  CHECK(sd.right(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-13));
  CHECK(sd.right(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-13));
  CHECK(sd.right(1, 1) == doctest::Approx(-inv_sqrt2).epsilon(1e-13));
  // biorthogonality
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(dot(sd.left_row(i), std::span<const double>(sd.right_vector(j))) ==
            doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("finite-difference Jacobian matches the analytic one") {
  const SystemSpec analytic = make_chromatography();
  Box box;
  box.lo = {0.5, 0.5};
  box.hi = {1.5, 1.5};
  const SystemSpec fd = make_system_from_flux(
      "chromatography-fd", 2,
      [](std::span<const double> u, std::span<double> f) {
        const double denom = 1.0 + u[0] + u[1];
        f[0] = u[0] / denom;
        f[1] = u[1] / denom;
      },
      box, 0.05);
  const Vec u{1.2, 0.8};
  const SpectralData a = eigen_decompose(analytic, u);
  const SpectralData b = eigen_decompose(fd, u);
  CHECK(a.eigenvalues[0] == doctest::Approx(b.eigenvalues[0]).epsilon(1e-9));
  CHECK(a.eigenvalues[1] == doctest::Approx(b.eigenvalues[1]).epsilon(1e-9));
}

TEST_CASE("averaged Jacobian") {
  SUBCASE("degenerate segment reduces to the pointwise decomposition") {
    const SystemSpec sys = make_chromatography();
    const Vec u{1.0, 1.0};
    const SpectralData point = eigen_decompose(sys, u);
    const SpectralData avg = averaged_jacobian(sys, u, u);
    CHECK(avg.eigenvalues[0] ==
          doctest::Approx(point.eigenvalues[0]).epsilon(1e-14));
    CHECK(avg.eigenvalues[1] ==
          doctest::Approx(point.eigenvalues[1]).epsilon(1e-14));
  }
  SUBCASE("linear systems average to the constant Jacobian") {
    const SystemSpec sys = make_linear_system({0.3, 0.7});
    const SpectralData avg =
        averaged_jacobian(sys, Vec{-0.5, 0.25}, Vec{0.75, -0.4});
    CHECK(avg.eigenvalues[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(avg.eigenvalues[1] == doctest::Approx(0.7).epsilon(1e-14));
  }
  SUBCASE("quadratic flux averages exactly") {
    // int_0^1 (0.5 + 0.5 * 0.4 s) ds = 0.6
    const SystemSpec sys = make_shifted_burgers();
    const SpectralData avg = averaged_jacobian(sys, Vec{0.0}, Vec{0.4});
    CHECK(avg.eigenvalues[0] == doctest::Approx(0.6).epsilon(1e-14));
  }
  SUBCASE("pair order does not change the eigenvalues") {
    const SystemSpec sys = make_chromatography();
    const Vec a{0.7, 1.3}, b{1.4, 0.8};
    const SpectralData ab = averaged_jacobian(sys, a, b);
    const SpectralData ba = averaged_jacobian(sys, b, a);
    CHECK(std::abs(ab.eigenvalues[0] - ba.eigenvalues[0]) < 1e-12);
    CHECK(std::abs(ab.eigenvalues[1] - ba.eigenvalues[1]) < 1e-12);
  }
}

TEST_CASE("eigen residuals stay tiny over random admissible states") {
  std::mt19937_64 rng(2026);
  const SystemSpec systems[] = {make_linear_system({0.3, 0.7}),
                                make_shifted_burgers(), make_chromatography()};
  for (const auto& sys : systems) {
    CAPTURE(sys.name);
    for (int trial = 0; trial < 1000; ++trial) {
      const Vec u = random_state(sys, rng);
      const SpectralData sd = eigen_decompose(sys, u);
      CHECK(eigen_residual(sys, u, sd) < 1e-10);
    }
  }
}

TEST_CASE("decomposition is bitwise deterministic") {
  const SystemSpec sys = make_chromatography();
  const Vec u{1.21, 0.87};
  const SpectralData a = eigen_decompose(sys, u);
  const SpectralData b = eigen_decompose(sys, u);
  CHECK(std::memcmp(a.eigenvalues.data(), b.eigenvalues.data(),
                    a.eigenvalues.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.right.a.data(), b.right.a.data(),
                    a.right.a.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.left.a.data(), b.left.a.data(),
                    a.left.a.size() * sizeof(double)) == 0);
}

TEST_CASE("straight-line defect") {
  CHECK(verify_straight_line(make_linear_system({0.3, 0.7}), 50, 1e-4) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(verify_straight_line(make_shifted_burgers(), 50, 1e-4) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // Both chromatography fields are straight: one eigenvector is constant,
  // the other is homogeneous of degree zero along itself.
  CHECK(verify_straight_line(make_chromatography(), 100, 1e-4) < 1e-6);
}

TEST_CASE("domain and hyperbolicity errors") {
  const SystemSpec sys = make_chromatography();
  CHECK_THROWS_AS(eigen_decompose(sys, Vec{5.0, 5.0}), DomainError);
  CHECK_THROWS_AS(make_linear_system({0.5, 0.5}), HyperbolicityError);
  CHECK_THROWS_AS(make_linear_system({0.3, 1.2}), HyperbolicityError);
  CHECK_THROWS_AS(make_linear_system({-0.1, 0.5}), HyperbolicityError);
}

TEST_CASE("3x3 systems use the generic eigensolver path") {
  const SystemSpec sys = make_linear_system({0.2, 0.5, 0.8});
  const SpectralData sd = eigen_decompose(sys, Vec{0.0, 0.0, 0.0});
  CHECK(sd.eigenvalues[0] == doctest::Approx(0.2));
  CHECK(sd.eigenvalues[1] == doctest::Approx(0.5));
  CHECK(sd.eigenvalues[2] == doctest::Approx(0.8));
  CHECK(eigen_residual(sys, Vec{0.0, 0.0, 0.0}, sd) < 1e-10);
}
