#include "nldiv/special.hpp"

#include <cmath>
#include <stdexcept>

namespace nldiv {

namespace {

// Lanczos coefficients, g = 7, 9 terms.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_sum(double z) {
  double x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + i);
  return x;
}

} // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
  if (x < 0.5) {
    // reflection keeps the series argument away from the poles
    return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) *
         lanczos_sum(z);
}

double lgamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("lgamma_fn: argument must be positive");
  if (x < 0.5)
    return std::log(M_PI / std::sin(M_PI * x)) - lgamma_fn(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

double c_ns(int n, double s) {
  if (n < 1 || n > 3) throw std::domain_error("c_ns: dimension must be 1, 2 or 3");
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("c_ns: s must lie in (0,1)");
  return std::exp2(2.0 * s) * gamma_fn(0.5 * (n + 2.0 * s)) * s * (1.0 - s) /
         (std::pow(M_PI, 0.5 * n) * gamma_fn(2.0 - s));
}

double sphere_measure(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: throw std::domain_error("sphere_measure: dimension must be 1, 2 or 3");
  }
}

double ball_volume(int n) { return sphere_measure(n) / n; }

} // namespace nldiv
