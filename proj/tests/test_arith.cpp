#include <random>

#include "bstri/arith.hpp"
#include "bstri/error.hpp"
#include "doctest.h"

using namespace bstri;

namespace {

long slow_gcd(long a, long b) {
  a = std::labs(a);
  b = std::labs(b);
  for (long d = std::max(a, b); d >= 1; --d)
    if (a % d == 0 && b % d == 0) return d;
  return 0;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Usage;
}

}  // namespace

TEST_CASE("gcd examples") {
  CHECK(gcd(2, 4) == 2);
  CHECK(gcd(0, 5) == 5);
  CHECK(gcd(-6, 9) == 3);
  CHECK(gcd(0, 0) == 0);
}

TEST_CASE("gcd and lcm agree with trial division") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-300, 300);
  for (int i = 0; i < 300; ++i) {
    const long a = d(rng), b = d(rng);
    CHECK(gcd(a, b) == slow_gcd(a, b));
    if (a != 0 && b != 0) CHECK(lcm(a, b) * gcd(a, b) == BigInt(std::labs(a * b)));
  }
}

TEST_CASE("p_part") {
  CHECK(p_part(567, 3) == 81);
  CHECK(p_part(567, 7) == 7);
  CHECK(p_part(5, 2) == 1);
  CHECK(kind_of([] { p_part(10, 4); }) == ErrorKind::NotPrime);
  for (long n = 1; n < 500; ++n) {
    for (long p : {2, 3, 5, 7}) {
      long q = 1;
      while (n % (q * p) == 0) q *= p;
      CHECK(p_part(n, p) == q);
    }
  }
}

TEST_CASE("mod_inverse") {
  CHECK(mod_inverse(1, 567) == 1);
  CHECK(mod_inverse(2, 27) == 14);
  CHECK(kind_of([] { mod_inverse(3, 9); }) == ErrorKind::NotCoprime);
  for (long m = 2; m < 60; ++m) {
    for (long a = -20; a < 20; ++a) {
      if (slow_gcd(a, m) != 1) continue;
      const BigInt x = mod_inverse(a, m);
      CHECK(x >= 0);
      CHECK(x < m);
      CHECK(mod(x * a, m) == 1);
    }
  }
}

TEST_CASE("guarded_pow") {
  SizeGuard g64;
  g64.max_bits = 64;
  SizeGuard g1024;
  g1024.max_bits = 1024;
  CHECK(guarded_pow(2, 10, g64) == BigInt(1024));
  CHECK_FALSE(guarded_pow(2, BigInt(1) << 20, g1024).has_value());
  CHECK(guarded_pow(5, 0, g64) == BigInt(1));
  CHECK(guarded_pow(-1, BigInt(1) << 100, g64) == BigInt(1));
  CHECK(guarded_pow(-1, (BigInt(1) << 100) + 1, g64) == BigInt(-1));
  CHECK(guarded_pow(0, BigInt(1) << 100, g64) == BigInt(0));
  CHECK(guarded_pow(-3, 3, g64) == BigInt(-27));
  for (long b = -9; b <= 9; ++b) {
    BigInt acc = 1;
    for (int e = 0; e < 15; ++e) {
      CHECK(guarded_pow(b, e, g1024) == acc);
      acc *= b;
    }
  }
}

TEST_CASE("guarded_tower") {
  SizeGuard g;
  const std::vector<BigInt> small{2, 3, 2};
  CHECK(guarded_tower(small, g) == BigInt(512));
  const std::vector<BigInt> big{2, 2, 2, 2, 2};
  CHECK_FALSE(guarded_tower(big, g).has_value());
}

TEST_CASE("pow_mod agrees with reduced exact powers") {
  for (long b = -7; b <= 7; ++b)
    for (long e = 0; e < 12; ++e)
      for (long m = 1; m < 30; ++m) {
        BigInt exact;
        mpz_pow_ui(exact.get_mpz_t(), BigInt(b).get_mpz_t(), e);
        CHECK(pow_mod(b, e, m) == mod(exact, m));
      }
}

TEST_CASE("prime divisors and parsing") {
  CHECK(prime_divisors(6751269) == std::vector<BigInt>{3, 7});
  CHECK(prime_divisors(1).empty());
  CHECK(parse_bigint("-123456789012345678901234567890").get_str() == "-123456789012345678901234567890");
  CHECK(kind_of([] { parse_bigint("12a"); }) == ErrorKind::Parse);
  CHECK(to_i64(BigInt(-5)) == -5);
  CHECK(kind_of([] { to_u64(BigInt(-1)); }) == ErrorKind::PreconditionViolated);
  CHECK(divides(3, 9));
  CHECK_FALSE(divides(2, 9));
}

TEST_CASE("size guard from environment") {
  setenv("BS_TRIANGLE_MAX_BITS", "128", 1);
  CHECK(SizeGuard::from_env().max_bits == 128);
  CHECK_FALSE(guarded_pow(2, 200, SizeGuard::from_env()).has_value());
  unsetenv("BS_TRIANGLE_MAX_BITS");
  CHECK(SizeGuard::from_env().max_bits == 4096);
}
