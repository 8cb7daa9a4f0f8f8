#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nldiv/special.hpp"

using namespace nldiv;

TEST_CASE("gamma on reference points") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  // sqrt(pi) and the half-integer recurrence, frozen from a high-precision
  // reference evaluation
  CHECK(gamma_fn(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-12));
  CHECK(gamma_fn(1.5) == doctest::Approx(0.8862269254527580137).epsilon(1e-12));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("gamma recurrence property on (0.1, 20)") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> xr(0.1, 20.0);
  for (int i = 0; i < 100; ++i) {
    const double x = xr(rng);
    const double lhs = gamma_fn(x + 1.0);
    CHECK(std::abs(lhs - x * gamma_fn(x)) <= 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("gamma rejects the nonpositive axis") {
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("c_ns at the reference point") {
  // n=1, s=1/2: 2 Gamma(1) (1/4) / (sqrt(pi) Gamma(3/2)) = 1/pi
  CHECK(c_ns(1, 0.5) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(c_ns(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(c_ns(1, 1.0), std::domain_error);
  CHECK_THROWS_AS(c_ns(4, 0.5), std::domain_error);
}

TEST_CASE("c_ns recovers both limit constants") {
  // the approach to either endpoint is first order in the distance, so the
  // 1e-3 budget holds at 1e-4 and the deviation scales linearly from there
  for (int n = 1; n <= 3; ++n) {
    const double d0 = std::abs(c_ns(n, 1e-4) / 1e-4 - 2.0 / sphere_measure(n));
    const double d1 = std::abs(c_ns(n, 1e-3) / 1e-3 - 2.0 / sphere_measure(n));
    CHECK(d0 <= 1e-3);
    CHECK(d1 <= 12.0 * d0);
    const double e0 =
        std::abs(c_ns(n, 1.0 - 1e-4) / 1e-4 - 4.0 * n / sphere_measure(n));
    const double e1 =
        std::abs(c_ns(n, 1.0 - 1e-3) / 1e-3 - 4.0 * n / sphere_measure(n));
    CHECK(e0 <= 1e-3);
    CHECK(e1 <= 12.0 * e0);
  }
}

TEST_CASE("sphere measure and ball volume") {
  CHECK(sphere_measure(1) == 2.0);
  CHECK(sphere_measure(2) == doctest::Approx(2.0 * M_PI));
  CHECK(sphere_measure(3) == doctest::Approx(4.0 * M_PI));
  for (int n = 1; n <= 3; ++n)
    CHECK(ball_volume(n) == doctest::Approx(sphere_measure(n) / n));
}
