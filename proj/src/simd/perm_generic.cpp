#include "bstri/simd/perm_kernels.hpp"

namespace bstri::simd::generic {

void compose(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = b[a[i]];
}

bool is_identity(const std::uint32_t* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

bool equal(const std::uint32_t* a, const std::uint32_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace bstri::simd::generic
