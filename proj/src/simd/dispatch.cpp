#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "secnet/simd/kernels.hpp"

namespace secnet::simd {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::scalar, detail::power_scalar,
                                 detail::weighted_power_sum_scalar,
                                 detail::pair_cross_derivatives_scalar};
  return table;
}

const KernelTable* avx2_kernels() noexcept {
#if defined(SECNET_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{Isa::avx2, detail::power_avx2, detail::weighted_power_sum_avx2,
                                 detail::pair_cross_derivatives_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("SECNET_SIMD");
    const std::string_view wanted = env ? env : "auto";
    if (wanted == "scalar") return scalar_kernels();
    if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace secnet::simd
