#if defined(__x86_64__) || defined(_M_X64)

#include "nldiv/simd/simd.hpp"

#include <immintrin.h>

// AVX2/FMA variants.  pow_neg computes exp(-p*log(x)) with a 4-lane
// double-precision log (atanh series after mantissa reduction to
// [sqrt(2)/2, sqrt(2))) and exp (Taylor to degree 13 after two-part ln2
// reduction).  Constants follow the usual fdlibm split of ln2.

namespace nldiv::simd::avx2 {

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kInvLn2 = 1.44269504088896338700e+00;
constexpr double kSqrt2 = 1.41421356237309514547;

__attribute__((target("avx2,fma"))) inline __m256d exp4(__m256d x) {
  const __m256d k = _mm256_round_pd(
      _mm256_mul_pd(x, _mm256_set1_pd(kInvLn2)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d f = _mm256_fmadd_pd(k, _mm256_set1_pd(-kLn2Hi), x);
  f = _mm256_fmadd_pd(k, _mm256_set1_pd(-kLn2Lo), f);

  // Taylor series of exp on |f| <= ln2/2, truncation below 1e-17 relative.
  __m256d q = _mm256_set1_pd(1.0 / 6227020800.0); // 1/13!
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 479001600.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 39916800.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 3628800.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 362880.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 40320.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 5040.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 720.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 120.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 24.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0 / 6.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(0.5));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0));
  q = _mm256_fmadd_pd(q, f, _mm256_set1_pd(1.0));

  // scale by 2^k through the exponent bits
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  const __m256i k64 = _mm256_cvtepi32_epi64(k32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(q, _mm256_castsi256_pd(bits));
}

__attribute__((target("avx2,fma"))) inline __m256d log4(__m256d x) {
  const __m256i ix = _mm256_castpd_si256(x);

  // biased exponent -> double, via the high 32 bits of each lane
  const __m256i hi32 = _mm256_srli_epi64(ix, 52);
  const __m256i pack_idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  const __m128i e32 =
      _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(hi32, pack_idx));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(e32), _mm256_set1_pd(1023.0));

  // mantissa in [1,2), shifted to [sqrt2/2, sqrt2)
  const __m256i mant = _mm256_or_si256(
      _mm256_and_si256(ix, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
      _mm256_set1_epi64x(0x3FF0000000000000ll));
  __m256d m = _mm256_castsi256_pd(mant);
  const __m256d big =
      _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d t = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d w = _mm256_mul_pd(t, t);

  // log(m) = 2t*atanh-series(w); |t| <= 3-2*sqrt(2), tail below 1e-15
  __m256d p = _mm256_set1_pd(1.0 / 17.0);
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 3.0));
  p = _mm256_fmadd_pd(p, w, one);
  p = _mm256_mul_pd(p, _mm256_add_pd(t, t));

  const __m256d r = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi),
                                    _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), p));
  return r;
}

} // namespace

__attribute__((target("avx2,fma"))) void pow_neg(const double* x, std::size_t n,
                                                 double p, double* out) {
  const __m256d mp = _mm256_set1_pd(-p);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, exp4(_mm256_mul_pd(mp, log4(v))));
  }
  if (i < n) {
    double buf[4] = {1.0, 1.0, 1.0, 1.0};
    for (std::size_t j = i; j < n; ++j) buf[j - i] = x[j];
    double res[4];
    _mm256_storeu_pd(res, exp4(_mm256_mul_pd(mp, log4(_mm256_loadu_pd(buf)))));
    for (std::size_t j = i; j < n; ++j) out[j] = res[j - i];
  }
}

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

__attribute__((target("avx2,fma"))) double dot(const double* a, const double* b,
                                               std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

__attribute__((target("avx2,fma"))) double dot3(const double* a, const double* b,
                                                const double* c, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i];
  return r;
}

__attribute__((target("avx2,fma"))) double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

} // namespace nldiv::simd::avx2

#endif
