#pragma once

// Exact integer helpers. BigInt is GMP's mpz_class; everything here is a pure
// function of its arguments.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bstri {

using BigInt = mpz_class;

// Upper limits on the size of exact results. Results that would exceed them
// come back as std::nullopt ("overflow") rather than being computed.
struct SizeGuard {
  std::size_t max_bits = 4096;
  std::size_t max_tower_height = 3;

  // Default guard, with max_bits overridden by BS_TRIANGLE_MAX_BITS when set.
  static SizeGuard from_env();
};

// nullopt encodes an exponent overflow under a SizeGuard.
using MaybeBig = std::optional<BigInt>;

BigInt gcd(const BigInt& m, const BigInt& n);
BigInt lcm(const BigInt& m, const BigInt& n);

bool is_prime(const BigInt& p);

// Largest power of the prime p dividing n (n >= 1). Throws NotPrime.
BigInt p_part(const BigInt& n, const BigInt& p);

// alpha in [0, m) with alpha * a == 1 (mod m). m == 1 gives 0. Throws NotCoprime.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

// base^exp, exp >= 0, or nullopt when |result| would need more than
// guard.max_bits bits.
MaybeBig guarded_pow(const BigInt& base, const BigInt& exp, const SizeGuard& guard);

// levels[0]^(levels[1]^(...)) evaluated right to left under the guard.
// Towers taller than guard.max_tower_height overflow.
MaybeBig guarded_tower(std::span<const BigInt> levels, const SizeGuard& guard);

// base^exp mod m for exp >= 0, m >= 1; result in [0, m).
BigInt pow_mod(const BigInt& base, const BigInt& exp, const BigInt& m);

// Mathematical residue in [0, m).
BigInt mod(const BigInt& v, const BigInt& m);

// Distinct prime divisors of n by trial division. Intended for the modest
// integers that appear as group orders; throws PreconditionViolated if a
// cofactor above 2^62 survives trial division up to `bound`.
std::vector<BigInt> prime_divisors(const BigInt& n, std::uint64_t bound = 1'000'000);

bool divides(const BigInt& d, const BigInt& n);

std::string to_string(const BigInt& v);
BigInt parse_bigint(const std::string& text);

// Narrowing with a range check; throws PreconditionViolated when out of range.
std::int64_t to_i64(const BigInt& v);
std::uint64_t to_u64(const BigInt& v);

}  // namespace bstri
