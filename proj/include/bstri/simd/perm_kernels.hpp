#pragma once

// Permutation kernels on uint32 point arrays, with a portable reference
// implementation and an AVX2 variant. perm_kernels() returns the variant
// picked for this CPU; BS_TRIANGLE_SIMD=scalar forces the reference one.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace bstri::simd {

// out[i] = b[a[i]]: apply a, then b. out must not alias b.
using ComposeFn = void (*)(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                           std::size_t n);
using IsIdentityFn = bool (*)(const std::uint32_t* p, std::size_t n);
using EqualFn = bool (*)(const std::uint32_t* a, const std::uint32_t* b, std::size_t n);

struct PermKernels {
  std::string_view name;
  ComposeFn compose;
  IsIdentityFn is_identity;
  EqualFn equal;
};

namespace generic {
void compose(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t n);
bool is_identity(const std::uint32_t* p, std::size_t n);
bool equal(const std::uint32_t* a, const std::uint32_t* b, std::size_t n);
}  // namespace generic

namespace avx2 {
void compose(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t n);
bool is_identity(const std::uint32_t* p, std::size_t n);
bool equal(const std::uint32_t* a, const std::uint32_t* b, std::size_t n);
}  // namespace avx2

bool cpu_has_avx2();

const PermKernels& generic_kernels();
const PermKernels& avx2_kernels();
const PermKernels& perm_kernels();

}  // namespace bstri::simd
