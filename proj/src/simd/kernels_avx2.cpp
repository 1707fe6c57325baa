// AVX2/FMA variants of the batch kernels. This translation unit is the only
// one compiled with -mavx2 -mfma; it is reached through the dispatch table
// after a CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace secnet::simd::detail {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;
constexpr double kSqrt2 = 1.41421356237309504880e+00;

// log(x) for positive normal x: x = 2^e m with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh(f), f = (m - 1)/(m + 1), |f| <= 0.1716, series to f^21.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_field = _mm256_srli_epi64(bits, 52);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_field, magic_bits)),
                            _mm256_set1_pd(4503599627370496.0));
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d f2 = _mm256_mul_pd(f, f);
  __m256d p = _mm256_set1_pd(1.0 / 21.0);
  for (int k = 9; k >= 0; --k) {
    p = _mm256_fmadd_pd(p, f2, _mm256_set1_pd(1.0 / (2 * k + 1)));
  }
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(f, f), p);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi),
                         _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), log_m));
}

// exp(y): y = n ln2 + r, |r| <= ln2/2, Taylor series of degree 13 for e^r.
inline __m256d exp_pd(__m256d y) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d yc = _mm256_min_pd(_mm256_max_pd(y, lo), hi);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(yc, _mm256_set1_pd(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), yc);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

  double coeff = 1.0;
  for (int k = 2; k <= 13; ++k) coeff /= k;
  __m256d p = _mm256_set1_pd(coeff);
  for (int k = 12; k >= 0; --k) {
    coeff *= (k + 1);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(coeff));
  }

  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                _mm256_castpd_si256(magic));
  ni = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(ni));

  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), _mm256_cmp_pd(y, lo, _CMP_LT_OQ));
  result = _mm256_blendv_pd(result, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                            _mm256_cmp_pd(y, hi, _CMP_GT_OQ));
  return result;
}

inline __m256d pow_pd(__m256d x, double exponent) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d is_zero = _mm256_cmp_pd(x, zero, _CMP_EQ_OQ);
  const __m256d safe = _mm256_blendv_pd(x, _mm256_set1_pd(1.0), is_zero);
  const __m256d value = exp_pd(_mm256_mul_pd(_mm256_set1_pd(exponent), log_pd(safe)));
  const double at_zero = exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return _mm256_blendv_pd(value, _mm256_set1_pd(at_zero), is_zero);
}

// Loads the last n % 4 lanes, padding with `fill`.
inline __m256d load_tail(const double* p, std::size_t count, double fill) {
  alignas(32) double buf[4] = {fill, fill, fill, fill};
  std::copy_n(p, count, buf);
  return _mm256_load_pd(buf);
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

// Per-lane body of pair_cross_derivatives; out_lanes[m] receives order m.
inline void cross_block(const double* near_term, int max_order, __m256d x, double exponent,
                        double inv_coeff, __m256d* out_lanes) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d t = _mm256_mul_pd(pow_pd(x, exponent), _mm256_set1_pd(inv_coeff));
  const __m256d q = _mm256_div_pd(one, _mm256_add_pd(one, t));
  const __m256d rest = _mm256_mul_pd(t, q);
  __m256d far_term[kMaxCrossOrder + 1];
  far_term[0] = q;
  __m256d qk = one;
  double fact = 1.0;
  for (int k = 1; k <= max_order; ++k) {
    qk = _mm256_mul_pd(qk, q);
    fact *= k;
    const double sign_fact = ((k % 2 == 1) ? 1.0 : -1.0) * fact;
    far_term[k] = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(sign_fact), qk), rest);
  }
  for (int m = 0; m <= max_order; ++m) {
    double binom = 1.0;
    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k <= m; ++k) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(binom * near_term[k]), far_term[m - k], acc);
      binom = binom * (m - k) / (k + 1);
    }
    out_lanes[m] = acc;
  }
}

}  // namespace

void power_avx2(const double* x, std::size_t n, double exponent, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, pow_pd(_mm256_loadu_pd(x + i), exponent));
  }
  if (i < n) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, pow_pd(load_tail(x + i, n - i, 1.0), exponent));
    std::copy_n(buf, n - i, out + i);
  }
}

double weighted_power_sum_avx2(const double* x, const double* w, std::size_t n,
                               double exponent) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), pow_pd(_mm256_loadu_pd(x + i), exponent), acc);
  }
  if (i < n) {
    acc = _mm256_fmadd_pd(load_tail(w + i, n - i, 0.0),
                          pow_pd(load_tail(x + i, n - i, 1.0), exponent), acc);
  }
  return hsum(acc);
}

void pair_cross_derivatives_avx2(const double* near_term, int max_order, const double* x,
                                 std::size_t n, double exponent, double inv_coeff, double* out) {
  __m256d lanes[kMaxCrossOrder + 1];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    cross_block(near_term, max_order, _mm256_loadu_pd(x + i), exponent, inv_coeff, lanes);
    for (int m = 0; m <= max_order; ++m) {
      _mm256_storeu_pd(out + static_cast<std::size_t>(m) * n + i, lanes[m]);
    }
  }
  if (i < n) {
    cross_block(near_term, max_order, load_tail(x + i, n - i, 1.0), exponent, inv_coeff, lanes);
    alignas(32) double buf[4];
    for (int m = 0; m <= max_order; ++m) {
      _mm256_store_pd(buf, lanes[m]);
      std::copy_n(buf, n - i, out + static_cast<std::size_t>(m) * n + i);
    }
  }
}

}  // namespace secnet::simd::detail
