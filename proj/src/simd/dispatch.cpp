#include <cstdlib>
#include <string_view>

#include "kinhydro/simd/kernels.hpp"

namespace kinhydro::simd {

const KernelTable& scalar_kernels()
{
  static const KernelTable table{"scalar", &detail::bilinear_scalar, &detail::outer3_scalar, &detail::cmatvec_scalar,
                                 &detail::cmatvec_acc_scalar};
  return table;
}

const KernelTable* avx2_kernels()
{
#if defined(KINHYDRO_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable table{"avx2", &detail::bilinear_avx2, &detail::outer3_avx2, &detail::cmatvec_avx2,
                                 &detail::cmatvec_acc_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active()
{
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("KINHYDRO_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar")
      return scalar_kernels();
    if (const KernelTable* t = avx2_kernels())
      return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace kinhydro::simd
