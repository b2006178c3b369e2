#include "tamp/simd/kernels.hpp"

#include <cstdlib>

namespace tamp::simd {

bool avx2_available() {
#if defined(TAMPKIT_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if !defined(TAMPKIT_HAVE_AVX2_TU)
const Kernels& avx2_kernels() { return scalar_kernels(); }
#endif

const Kernels& active_kernels() {
  static const Kernels& chosen = []() -> const Kernels& {
    if (std::getenv("TAMPKIT_FORCE_SCALAR") != nullptr) return scalar_kernels();
    if (avx2_available()) return avx2_kernels();
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace tamp::simd
