// Built with -mavx2 on x86; only reached after a runtime CPU check. Other
// targets get thin forwards to the reference kernels.
#include "bstri/simd/perm_kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace bstri::simd::avx2 {

void compose(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t n) {
  std::size_t i = 0;
  const auto* base = reinterpret_cast<const int*>(b);
  for (; i + 8 <= n; i += 8) {
    const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i v = _mm256_i32gather_epi32(base, idx, 4);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), v);
  }
  for (; i < n; ++i) out[i] = b[a[i]];
}

bool is_identity(const std::uint32_t* p, std::size_t n) {
  std::size_t i = 0;
  __m256i expect = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i step = _mm256_set1_epi32(8);
  for (; i + 8 <= n; i += 8) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    if (_mm256_movemask_epi8(_mm256_cmpeq_epi32(v, expect)) != -1) return false;
    expect = _mm256_add_epi32(expect, step);
  }
  for (; i < n; ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

bool equal(const std::uint32_t* a, const std::uint32_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    if (_mm256_movemask_epi8(_mm256_cmpeq_epi32(va, vb)) != -1) return false;
  }
  for (; i < n; ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace bstri::simd::avx2

#else

namespace bstri::simd::avx2 {

void compose(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t n) {
  generic::compose(a, b, out, n);
}
bool is_identity(const std::uint32_t* p, std::size_t n) { return generic::is_identity(p, n); }
bool equal(const std::uint32_t* a, const std::uint32_t* b, std::size_t n) {
  return generic::equal(a, b, n);
}

}  // namespace bstri::simd::avx2

#endif
