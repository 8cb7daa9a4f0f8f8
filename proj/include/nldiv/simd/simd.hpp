#pragma once

#include <cstddef>

// Batched arithmetic kernels used by the quadrature and assembly inner loops.
// Every kernel exists as a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected once at startup.  The scalar
// namespace is always available so the variants can be equivalence-tested
// against it.

namespace nldiv::simd {

enum class Backend { scalar, avx2, neon };

// Backend chosen at first use: NLDIV_SIMD=scalar|avx2|neon|auto overrides the
// CPU probe.  The choice is process-wide and stable for the lifetime of the
// run, so identical inputs give identical outputs.
Backend active();
const char* backend_name();

// out[i] = x[i]^(-p).  Requires x[i] > 0 and a representable result.
// Relative accuracy of the SIMD variants vs std::pow is ~1e-14.
void pow_neg(const double* x, std::size_t n, double p, double* out);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i]*b[i]*c[i]
double dot3(const double* a, const double* b, const double* c, std::size_t n);

// sum_i a[i]
double sum(const double* a, std::size_t n);

namespace scalar {
void pow_neg(const double* x, std::size_t n, double p, double* out);
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double sum(const double* a, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
bool available();
void pow_neg(const double* x, std::size_t n, double p, double* out);
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double sum(const double* a, std::size_t n);
} // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
bool available();
void pow_neg(const double* x, std::size_t n, double p, double* out);
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double sum(const double* a, std::size_t n);
} // namespace neon
#endif

} // namespace nldiv::simd
