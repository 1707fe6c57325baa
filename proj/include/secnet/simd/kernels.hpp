#pragma once

// Data-parallel inner loops used by the quadrature integrands and the Monte
// Carlo interference sums. Every kernel has a scalar reference version and,
// where the CPU allows it, an AVX2 version; the active table is picked once at
// first use (override with SECNET_SIMD=scalar|avx2).

#include <cstddef>
#include <span>
#include <string_view>

namespace secnet::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  /// out[i] = x[i]^exponent for x[i] >= 0 (0^e is 0 for e > 0, +inf for e < 0).
  void (*power)(const double* x, std::size_t n, double exponent, double* out);

  /// sum_i w[i] * x[i]^exponent.
  double (*weighted_power_sum)(const double* x, const double* w, std::size_t n, double exponent);

  /// Scaled s-derivatives of the pair cross term (1 - h_a)(1 - h_b) of the
  /// FD-tier Laplace exponent, h_a = 1/(1 + a s), h_b = 1/(1 + b s).
  ///
  /// `near_term[k]` holds s^k d^k/ds^k (1 - h_a) for k = 0..max_order (shared by
  /// all nodes). Node i has b_i s = 1 / t_i with t_i = coeff^-1 * x[i]^exponent,
  /// so a node that sits on the far interferer (x[i] = 0) stays finite.
  /// out[m * n + i] = s^m d^m/ds^m [(1 - h_a)(1 - h_b)] at node i.
  void (*pair_cross_derivatives)(const double* near_term, int max_order, const double* x,
                                 std::size_t n, double exponent, double inv_coeff, double* out);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

/// Table selected for this process.
const KernelTable& active() noexcept;

inline void power(std::span<const double> x, double exponent, std::span<double> out) {
  active().power(x.data(), x.size(), exponent, out.data());
}

inline double weighted_power_sum(std::span<const double> x, std::span<const double> w,
                                 double exponent) {
  return active().weighted_power_sum(x.data(), w.data(), x.size(), exponent);
}

}  // namespace secnet::simd
