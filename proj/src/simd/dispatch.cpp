#include <cstdlib>
#include <string_view>

#include "bstri/simd/perm_kernels.hpp"

namespace bstri::simd {

namespace {

const PermKernels kGeneric{"scalar", generic::compose, generic::is_identity, generic::equal};
const PermKernels kAvx2{"avx2", avx2::compose, avx2::is_identity, avx2::equal};

const PermKernels& select() {
  const char* forced = std::getenv("BS_TRIANGLE_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") return kGeneric;
  return cpu_has_avx2() ? kAvx2 : kGeneric;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const PermKernels& generic_kernels() { return kGeneric; }
const PermKernels& avx2_kernels() { return kAvx2; }

const PermKernels& perm_kernels() {
  static const PermKernels& chosen = select();
  return chosen;
}

}  // namespace bstri::simd
