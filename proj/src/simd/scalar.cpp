#include "nldiv/simd/simd.hpp"

#include <cmath>

namespace nldiv::simd::scalar {

void pow_neg(const double* x, std::size_t n, double p, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(x[i], -p);
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

} // namespace nldiv::simd::scalar
