#if defined(__aarch64__)

#include "nldiv/simd/simd.hpp"

#include <arm_neon.h>

// NEON variants, two double lanes.  Same reduction scheme and polynomial
// constants as the AVX2 translation unit.

namespace nldiv::simd::neon {

bool available() { return true; }

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kInvLn2 = 1.44269504088896338700e+00;
constexpr double kSqrt2 = 1.41421356237309514547;

inline float64x2_t exp2l(float64x2_t x) {
  const float64x2_t k = vrndnq_f64(vmulq_f64(x, vdupq_n_f64(kInvLn2)));
  float64x2_t f = vfmaq_f64(x, k, vdupq_n_f64(-kLn2Hi));
  f = vfmaq_f64(f, k, vdupq_n_f64(-kLn2Lo));

  float64x2_t q = vdupq_n_f64(1.0 / 6227020800.0);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 479001600.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 39916800.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 3628800.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 362880.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 40320.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 5040.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 720.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 120.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 24.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0 / 6.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(0.5), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0), q, f);
  q = vfmaq_f64(vdupq_n_f64(1.0), q, f);

  const int64x2_t ki = vcvtnq_s64_f64(k);
  const int64x2_t bits = vshlq_n_s64(vaddq_s64(ki, vdupq_n_s64(1023)), 52);
  return vmulq_f64(q, vreinterpretq_f64_s64(bits));
}

inline float64x2_t log2l(float64x2_t x) {
  const int64x2_t ix = vreinterpretq_s64_f64(x);
  const int64x2_t ebits = vshrq_n_s64(ix, 52);
  float64x2_t e = vsubq_f64(vcvtq_f64_s64(ebits), vdupq_n_f64(1023.0));

  const int64x2_t mant = vorrq_s64(
      vandq_s64(ix, vdupq_n_s64(0x000FFFFFFFFFFFFFll)),
      vdupq_n_s64(0x3FF0000000000000ll));
  float64x2_t m = vreinterpretq_f64_s64(mant);
  const uint64x2_t big = vcgtq_f64(m, vdupq_n_f64(kSqrt2));
  m = vbslq_f64(big, vmulq_f64(m, vdupq_n_f64(0.5)), m);
  e = vbslq_f64(big, vaddq_f64(e, vdupq_n_f64(1.0)), e);

  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t t = vdivq_f64(vsubq_f64(m, one), vaddq_f64(m, one));
  const float64x2_t w = vmulq_f64(t, t);

  float64x2_t p = vdupq_n_f64(1.0 / 17.0);
  p = vfmaq_f64(vdupq_n_f64(1.0 / 15.0), p, w);
  p = vfmaq_f64(vdupq_n_f64(1.0 / 13.0), p, w);
  p = vfmaq_f64(vdupq_n_f64(1.0 / 11.0), p, w);
  p = vfmaq_f64(vdupq_n_f64(1.0 / 9.0), p, w);
  p = vfmaq_f64(vdupq_n_f64(1.0 / 7.0), p, w);
  p = vfmaq_f64(vdupq_n_f64(1.0 / 5.0), p, w);
  p = vfmaq_f64(vdupq_n_f64(1.0 / 3.0), p, w);
  p = vfmaq_f64(one, p, w);
  p = vmulq_f64(p, vaddq_f64(t, t));

  return vfmaq_f64(vfmaq_f64(p, e, vdupq_n_f64(kLn2Lo)), e, vdupq_n_f64(kLn2Hi));
}

} // namespace

void pow_neg(const double* x, std::size_t n, double p, double* out) {
  const float64x2_t mp = vdupq_n_f64(-p);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    vst1q_f64(out + i, exp2l(vmulq_f64(mp, log2l(v))));
  }
  if (i < n) {
    double buf[2] = {x[i], 1.0};
    double res[2];
    vst1q_f64(res, exp2l(vmulq_f64(mp, log2l(vld1q_f64(buf)))));
    out[i] = res[0];
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, ab, vld1q_f64(c + i));
  }
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i];
  return r;
}

double sum(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

} // namespace nldiv::simd::neon

#endif
