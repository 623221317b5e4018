#include "bstri/arith.hpp"

#include <cstdlib>
#include <limits>

#include "bstri/error.hpp"

namespace bstri {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotADivisor: return "NotADivisor";
    case ErrorKind::UnmappedGenerator: return "UnmappedGenerator";
    case ErrorKind::UndeclaredGenerator: return "UndeclaredGenerator";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::IncompleteTable: return "IncompleteTable";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::DegreeLimitExceeded: return "DegreeLimitExceeded";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

SizeGuard SizeGuard::from_env() {
  SizeGuard guard;
  if (const char* env = std::getenv("BS_TRIANGLE_MAX_BITS")) {
    char* end = nullptr;
    unsigned long long bits = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && bits >= 64) {
      guard.max_bits = static_cast<std::size_t>(bits);
    }
  }
  return guard;
}

BigInt gcd(const BigInt& m, const BigInt& n) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), n.get_mpz_t());
  return g;
}

BigInt lcm(const BigInt& m, const BigInt& n) {
  BigInt l;
  mpz_lcm(l.get_mpz_t(), m.get_mpz_t(), n.get_mpz_t());
  return l;
}

bool is_prime(const BigInt& p) {
  if (p < 2) return false;
  return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

BigInt p_part(const BigInt& n, const BigInt& p) {
  if (!is_prime(p)) {
    throw Error(ErrorKind::NotPrime, "p_part: " + p.get_str() + " is not prime");
  }
  if (n < 1) {
    throw Error(ErrorKind::PreconditionViolated, "p_part: n must be positive");
  }
  BigInt rest = n;
  BigInt part = 1;
  while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
    rest /= p;
    part *= p;
  }
  return part;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  if (m < 1) {
    throw Error(ErrorKind::PreconditionViolated, "mod_inverse: modulus must be positive");
  }
  if (gcd(a, m) != 1) {
    throw Error(ErrorKind::NotCoprime,
                "mod_inverse: " + a.get_str() + " is not invertible mod " + m.get_str());
  }
  if (m == 1) return 0;
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return mod(inv, m);
}

MaybeBig guarded_pow(const BigInt& base, const BigInt& exp, const SizeGuard& guard) {
  if (exp < 0) {
    throw Error(ErrorKind::PreconditionViolated, "guarded_pow: negative exponent");
  }
  if (exp == 0) return BigInt(1);
  if (base == 0 || base == 1) return base;
  if (base == -1) return mpz_odd_p(exp.get_mpz_t()) ? BigInt(-1) : BigInt(1);
  // |base| >= 2, so the result needs at least exp * (bits(base) - 1) + 1 bits.
  const std::size_t base_bits = mpz_sizeinbase(base.get_mpz_t(), 2);
  if (!mpz_fits_ulong_p(exp.get_mpz_t())) return std::nullopt;
  const unsigned long e = exp.get_ui();
  const BigInt lower_bits = BigInt(e) * (base_bits - 1) + 1;
  if (lower_bits > guard.max_bits) return std::nullopt;
  BigInt result;
  mpz_pow_ui(result.get_mpz_t(), base.get_mpz_t(), e);
  if (mpz_sizeinbase(result.get_mpz_t(), 2) > guard.max_bits) return std::nullopt;
  return result;
}

MaybeBig guarded_tower(std::span<const BigInt> levels, const SizeGuard& guard) {
  if (levels.empty()) return BigInt(1);
  if (levels.size() > guard.max_tower_height) return std::nullopt;
  BigInt acc = levels.back();
  for (std::size_t i = levels.size() - 1; i-- > 0;) {
    if (acc < 0) {
      throw Error(ErrorKind::PreconditionViolated, "guarded_tower: negative exponent");
    }
    MaybeBig next = guarded_pow(levels[i], acc, guard);
    if (!next) return std::nullopt;
    acc = std::move(*next);
  }
  return acc;
}

BigInt pow_mod(const BigInt& base, const BigInt& exp, const BigInt& m) {
  if (exp < 0 || m < 1) {
    throw Error(ErrorKind::PreconditionViolated, "pow_mod: need exp >= 0 and m >= 1");
  }
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return mod(r, m);
}

BigInt mod(const BigInt& v, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

std::vector<BigInt> prime_divisors(const BigInt& n, std::uint64_t bound) {
  std::vector<BigInt> primes;
  BigInt rest = abs(n);
  if (rest == 0) {
    throw Error(ErrorKind::PreconditionViolated, "prime_divisors: zero has no finite factorization");
  }
  for (std::uint64_t q = 2; q <= bound && BigInt(q) * q <= rest; q += (q == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), q)) {
      primes.emplace_back(q);
      while (mpz_divisible_ui_p(rest.get_mpz_t(), q)) rest /= q;
    }
  }
  if (rest > 1) {
    if (!is_prime(rest) && rest > BigInt(bound) * bound) {
      throw Error(ErrorKind::PreconditionViolated,
                  "prime_divisors: cofactor " + rest.get_str() + " not factored");
    }
    primes.push_back(rest);
  }
  return primes;
}

bool divides(const BigInt& d, const BigInt& n) {
  if (d == 0) return n == 0;
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

std::string to_string(const BigInt& v) { return v.get_str(); }

BigInt parse_bigint(const std::string& text) {
  BigInt v;
  std::string t = text;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty() || v.set_str(t, 10) != 0) {
    throw ParseError("invalid integer '" + text + "'", 0);
  }
  return v;
}

std::int64_t to_i64(const BigInt& v) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) {
    throw Error(ErrorKind::PreconditionViolated, "integer " + v.get_str() + " exceeds 64 bits");
  }
  return v.get_si();
}

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || !mpz_fits_ulong_p(v.get_mpz_t())) {
    throw Error(ErrorKind::PreconditionViolated, "integer " + v.get_str() + " out of range");
  }
  return v.get_ui();
}

}  // namespace bstri
