#pragma once

#include <cstddef>

namespace secnet::simd::detail {

// Highest derivative order the cross-term kernels support.
inline constexpr int kMaxCrossOrder = 40;

void power_scalar(const double* x, std::size_t n, double exponent, double* out);
double weighted_power_sum_scalar(const double* x, const double* w, std::size_t n,
                                 double exponent);
void pair_cross_derivatives_scalar(const double* near_term, int max_order, const double* x,
                                   std::size_t n, double exponent, double inv_coeff,
                                   double* out);

#if defined(SECNET_HAVE_AVX2)
void power_avx2(const double* x, std::size_t n, double exponent, double* out);
double weighted_power_sum_avx2(const double* x, const double* w, std::size_t n,
                               double exponent);
void pair_cross_derivatives_avx2(const double* near_term, int max_order, const double* x,
                                 std::size_t n, double exponent, double inv_coeff, double* out);
#endif

}  // namespace secnet::simd::detail
