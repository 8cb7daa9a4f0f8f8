#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nldiv/correspondence.hpp"
#include "nldiv/special.hpp"

using namespace nldiv;

namespace {

// dense-quadrature oracle for the anisotropic sphere integral
// int phi_i phi_j (sum sigma_k^2 phi_k^2)^{-(n+2)/2}
double dense_sphere_integral(const std::vector<double>& sigma, int i, int j) {
  const int n = static_cast<int>(sigma.size());
  const SphereRule rule = sphere_rule(n, 5);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    double denom = 0.0;
    for (int d = 0; d < n; ++d)
      denom += sigma[static_cast<std::size_t>(d)] * sigma[static_cast<std::size_t>(d)] *
               rule.nodes[q][d] * rule.nodes[q][d];
    acc += rule.weights[q] * rule.nodes[q][i] * rule.nodes[q][j] *
           std::pow(denom, -0.5 * (n + 2));
  }
  return acc;
}

} // namespace

TEST_CASE("rule weights sum to the sphere measure") {
  for (int n = 1; n <= 3; ++n)
    for (int level = 1; level <= 3; ++level) {
      const SphereRule r = sphere_rule(n, level);
      double w = 0.0;
      for (double x : r.weights) {
        CHECK(x > 0.0);
        w += x;
      }
      CHECK(std::abs(w - sphere_measure(n)) <= 1e-10);
      for (const Vec& node : r.nodes)
        CHECK(std::abs(node.norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("spec node layouts") {
  const SphereRule one = sphere_rule(1, 3);
  REQUIRE(one.nodes.size() == 2);
  CHECK(one.nodes[0][0] == -1.0);
  CHECK(one.nodes[1][0] == 1.0);
  CHECK(one.weights[0] == 1.0);

  const SphereRule circle = sphere_rule(2, 1);
  CHECK(circle.nodes.size() == 128);
  CHECK(circle.weights[0] == doctest::Approx(2.0 * M_PI / 128.0));
}

TEST_CASE("second moments integrate exactly") {
  for (int n = 1; n <= 3; ++n) {
    const SphereRule r = sphere_rule(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double m = 0.0;
        for (std::size_t q = 0; q < r.nodes.size(); ++q)
          m += r.weights[q] * r.nodes[q][i] * r.nodes[q][j];
        const double target = i == j ? sphere_measure(n) / n : 0.0;
        CHECK(std::abs(m - target) <= 1e-12);
      }
  }
}

TEST_CASE("hyperellipsoid integral on the closed-form cases") {
  // unit circle: V_E = pi
  CHECK(hyperellipsoid_integral({1.0, 1.0}, 0) == doctest::Approx(M_PI).epsilon(1e-13));
  // axes 1, 1/2: V_E = pi/2
  CHECK(hyperellipsoid_integral({1.0, 2.0}, 0) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-13));
  CHECK(hyperellipsoid_integral({1.0, 2.0}, 1) ==
        doctest::Approx(M_PI / 8.0).epsilon(1e-13));
  CHECK_THROWS_AS(hyperellipsoid_integral({1.0, -1.0}, 0), std::domain_error);
}

TEST_CASE("hyperellipsoid integral matches dense sphere quadrature") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> sr(0.5, 2.0);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 2);
    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (double& s : sigma) s = sr(rng);
    for (int i = 0; i < n; ++i) {
      const double exact = hyperellipsoid_integral(sigma, i);
      CHECK(std::abs(dense_sphere_integral(sigma, i, i) - exact) <= 1e-8 * exact);
    }
    // off-diagonal integrals vanish by odd symmetry
    CHECK(std::abs(dense_sphere_integral(sigma, 0, 1)) <= 1e-10);
  }
}

TEST_CASE("diagonalized sphere average reproduces the eigenvalues") {
  // (1/V_n) int phi_i phi_j (...)^{-(n+2)/2} = lambda_i delta_ij with
  // sigma built from lambda
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lr(0.5, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 2);
    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (double& l : lambda) l = lr(rng);
    const std::vector<double> sigma = sigma_from_lambda(lambda);
    for (int i = 0; i < n; ++i) {
      const double avg = dense_sphere_integral(sigma, i, i) / ball_volume(n);
      CHECK(std::abs(avg - lambda[static_cast<std::size_t>(i)]) <= 1e-8);
    }
  }
}
