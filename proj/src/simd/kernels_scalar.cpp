#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace secnet::simd::detail {

namespace {

double pow_ref(double x, double exponent) {
  if (x == 0.0) return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::pow(x, exponent);
}

}  // namespace

void power_scalar(const double* x, std::size_t n, double exponent, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = pow_ref(x[i], exponent);
}

double weighted_power_sum_scalar(const double* x, const double* w, std::size_t n,
                                 double exponent) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * pow_ref(x[i], exponent);
  return acc;
}

void pair_cross_derivatives_scalar(const double* near_term, int max_order, const double* x,
                                   std::size_t n, double exponent, double inv_coeff,
                                   double* out) {
  double far_term[kMaxCrossOrder + 1];
  for (std::size_t i = 0; i < n; ++i) {
    const double t = pow_ref(x[i], exponent) * inv_coeff;
    const double q = 1.0 / (1.0 + t);
    const double rest = t * q;
    far_term[0] = q;
    double qk = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= max_order; ++k) {
      qk *= q;
      fact *= k;
      far_term[k] = ((k % 2 == 1) ? 1.0 : -1.0) * fact * qk * rest;
    }
    for (int m = 0; m <= max_order; ++m) {
      double binom = 1.0;
      double acc = 0.0;
      for (int k = 0; k <= m; ++k) {
        acc += binom * near_term[k] * far_term[m - k];
        binom = binom * (m - k) / (k + 1);
      }
      out[static_cast<std::size_t>(m) * n + i] = acc;
    }
  }
}

}  // namespace secnet::simd::detail
