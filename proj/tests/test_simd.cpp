#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "secnet/simd/kernels.hpp"

using namespace secnet::simd;

namespace {

std::vector<double> log_uniform(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> v(n);
  for (double& x : v) x = std::exp(u(rng));
  return v;
}

double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("active table is reported") {
  const KernelTable& t = active();
  MESSAGE("active kernels: " << to_string(t.isa));
  CHECK((t.isa == Isa::scalar || t.isa == Isa::avx2));
}

TEST_CASE("scalar power matches std::pow and the zero conventions") {
  const std::vector<double> x = {0.0, 1e-300, 0.5, 1.0, 2.0, 1e300};
  std::vector<double> out(x.size());
  scalar_kernels().power(x.data(), x.size(), -1.75, out.data());
  CHECK(std::isinf(out[0]));
  for (std::size_t i = 1; i < x.size(); ++i) CHECK(out[i] == std::pow(x[i], -1.75));
  scalar_kernels().power(x.data(), x.size(), 0.5, out.data());
  CHECK(out[0] == 0.0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const KernelTable* avx = avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 unavailable; equivalence test skipped");
    return;
  }
  const KernelTable& ref = scalar_kernels();

  // Every tail length 0..7 plus a long vector.
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 7u, 9u, 1031u}) {
    for (double e : {-1.75, -2.0, 0.5714285714285714, 3.0, -0.3}) {
      std::vector<double> x = log_uniform(n, 1e-12, 1e12, static_cast<unsigned>(n * 7 + 1));
      if (n > 2) x[1] = 0.0;
      std::vector<double> a(n), b(n);
      ref.power(x.data(), n, e, a.data());
      avx->power(x.data(), n, e, b.data());
      for (std::size_t i = 0; i < n; ++i) {
        if (std::isinf(a[i])) {
          CHECK(std::isinf(b[i]));
        } else {
          CHECK(rel_diff(a[i], b[i]) < 1e-13);
        }
      }

      const std::vector<double> w = log_uniform(n, 0.1, 10.0, static_cast<unsigned>(n + 99));
      if (n > 2) x[1] = 1.0;
      const double sa = ref.weighted_power_sum(x.data(), w.data(), n, e);
      const double sb = avx->weighted_power_sum(x.data(), w.data(), n, e);
      CHECK(rel_diff(sa, sb) < 1e-12);
    }
  }
}

TEST_CASE("pair cross derivatives: order 0 is the product and AVX2 agrees") {
  const int max_order = 6;
  const std::vector<double> near = {0.3, 0.21, -0.147, 0.2058, -0.432, 1.2, -4.1};
  for (std::size_t n : {1u, 4u, 7u, 64u, 257u}) {
    std::vector<double> x = log_uniform(n, 1e-6, 1e6, static_cast<unsigned>(n));
    x[0] = 0.0;  // a node on the far interferer
    std::vector<double> ref_out((max_order + 1) * n);
    scalar_kernels().pair_cross_derivatives(near.data(), max_order, x.data(), n, 1.75, 0.8,
                                            ref_out.data());
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (x[i] == 0.0 ? 0.0 : std::pow(x[i], 1.75)) * 0.8;
      CHECK(ref_out[i] == doctest::Approx(near[0] * (1.0 / (1.0 + t))));
      for (int m = 0; m <= max_order; ++m) CHECK(std::isfinite(ref_out[m * n + i]));
    }
    if (const KernelTable* avx = avx2_kernels()) {
      std::vector<double> out((max_order + 1) * n);
      avx->pair_cross_derivatives(near.data(), max_order, x.data(), n, 1.75, 0.8, out.data());
      for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(std::abs(out[k] - ref_out[k]) <= 1e-12 * (1.0 + std::abs(ref_out[k])));
      }
    }
  }
}

TEST_CASE("span wrappers dispatch to the active table") {
  const std::vector<double> x = {1.0, 4.0, 9.0};
  const std::vector<double> w = {1.0, 2.0, 3.0};
  std::vector<double> out(3);
  power(x, 0.5, out);
  CHECK(out[1] == doctest::Approx(2.0));
  CHECK(weighted_power_sum(x, w, -0.5) == doctest::Approx(1.0 + 1.0 + 1.0));
}
