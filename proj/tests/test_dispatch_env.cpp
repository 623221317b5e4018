#include <cstdlib>

#include "bstri/simd/perm_kernels.hpp"
#include "doctest.h"

TEST_CASE("BS_TRIANGLE_SIMD=scalar forces the reference kernels") {
  setenv("BS_TRIANGLE_SIMD", "scalar", 1);
  CHECK(bstri::simd::perm_kernels().name == "scalar");
}
