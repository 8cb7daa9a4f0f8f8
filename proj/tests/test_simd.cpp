#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nldiv/simd/simd.hpp"

using namespace nldiv;

TEST_CASE("pow_neg matches std::pow across magnitudes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lr(-12.0, 12.0);
  for (double p : {0.5, 1.0, 1.6, 2.0, 3.4, 5.0, 6.0}) {
    std::vector<double> x(100001), got(x.size());
    for (double& e : x) e = std::pow(10.0, lr(rng));
    simd::pow_neg(x.data(), x.size(), p, got.data());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ref = std::pow(x[i], -p);
      worst = std::max(worst, std::abs(got[i] - ref) / ref);
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("active backend agrees with the scalar reference") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const std::size_t n = 7777; // odd length exercises the tail path
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    c[i] = u(rng);
  }
  const double d_ref = simd::scalar::dot(a.data(), b.data(), n);
  const double d_act = simd::dot(a.data(), b.data(), n);
  CHECK(std::abs(d_ref - d_act) <= 1e-11 * (1.0 + std::abs(d_ref)));

  const double t_ref = simd::scalar::dot3(a.data(), b.data(), c.data(), n);
  const double t_act = simd::dot3(a.data(), b.data(), c.data(), n);
  CHECK(std::abs(t_ref - t_act) <= 1e-11 * (1.0 + std::abs(t_ref)));

  const double s_ref = simd::scalar::sum(a.data(), n);
  const double s_act = simd::sum(a.data(), n);
  CHECK(std::abs(s_ref - s_act) <= 1e-11 * (1.0 + std::abs(s_ref)));

  std::vector<double> x(n), r1(n), r2(n);
  for (double& e : x) e = std::exp(u(rng));
  simd::scalar::pow_neg(x.data(), n, 2.3, r1.data());
  simd::pow_neg(x.data(), n, 2.3, r2.data());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(r1[i] - r2[i]) / r1[i]);
  CHECK(worst <= 1e-12);
}

TEST_CASE("kernels are bitwise deterministic run to run") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::vector<double> x(1003), r1(x.size()), r2(x.size());
  for (double& e : x) e = u(rng);
  simd::pow_neg(x.data(), x.size(), 1.7, r1.data());
  simd::pow_neg(x.data(), x.size(), 1.7, r2.data());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(r1[i] == r2[i]);
  CHECK(simd::dot(x.data(), r1.data(), x.size()) ==
        simd::dot(x.data(), r2.data(), x.size()));
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 variant agrees with scalar when available") {
  if (!simd::avx2::available()) return;
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> lr(-10.0, 10.0);
  std::vector<double> x(4097), ref(x.size()), got(x.size());
  for (double& e : x) e = std::pow(10.0, lr(rng));
  simd::scalar::pow_neg(x.data(), x.size(), 3.2, ref.data());
  simd::avx2::pow_neg(x.data(), x.size(), 3.2, got.data());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(got[i] - ref[i]) / ref[i]);
  CHECK(worst <= 1e-12);
}
#endif
