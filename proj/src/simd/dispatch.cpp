#include "nldiv/simd/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace nldiv::simd {

namespace {

Backend pick() {
  const char* env = std::getenv("NLDIV_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(env, "avx2") == 0 && avx2::available()) return Backend::avx2;
#endif
#if defined(__aarch64__)
    if (std::strcmp(env, "neon") == 0) return Backend::neon;
#endif
    // unknown or unavailable value falls through to the probe
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2::available()) return Backend::avx2;
#endif
#if defined(__aarch64__)
  return Backend::neon;
#endif
  return Backend::scalar;
}

Backend g_backend = pick();

} // namespace

Backend active() { return g_backend; }

const char* backend_name() {
  switch (g_backend) {
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    default: return "scalar";
  }
}

void pow_neg(const double* x, std::size_t n, double p, double* out) {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return avx2::pow_neg(x, n, p, out);
#endif
#if defined(__aarch64__)
    case Backend::neon: return neon::pow_neg(x, n, p, out);
#endif
    default: return scalar::pow_neg(x, n, p, out);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return avx2::dot(a, b, n);
#endif
#if defined(__aarch64__)
    case Backend::neon: return neon::dot(a, b, n);
#endif
    default: return scalar::dot(a, b, n);
  }
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return avx2::dot3(a, b, c, n);
#endif
#if defined(__aarch64__)
    case Backend::neon: return neon::dot3(a, b, c, n);
#endif
    default: return scalar::dot3(a, b, c, n);
  }
}

double sum(const double* a, std::size_t n) {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return avx2::sum(a, n);
#endif
#if defined(__aarch64__)
    case Backend::neon: return neon::sum(a, n);
#endif
    default: return scalar::sum(a, n);
  }
}

} // namespace nldiv::simd
