#pragma once

// Parameters of the triangle group
//   G(a,b;c,d;e,f) = < x,y,z | y^-1 x^a y = x^b, z^-1 y^c z = y^d, x^-1 z^e x = z^f >
// and the formulas built from them. Pairs are indexed 0 (a,b), 1 (c,d),
// 2 (e,f); generators are x = 0, y = 1, z = 2.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bstri/arith.hpp"
#include "bstri/word.hpp"

namespace bstri {

inline constexpr GenId kX = 0;
inline constexpr GenId kY = 1;
inline constexpr GenId kZ = 2;

struct TriangleParams {
  std::array<BigInt, 6> v;

  TriangleParams() = default;
  // Throws PreconditionViolated if any value is zero.
  TriangleParams(BigInt a, BigInt b, BigInt c, BigInt d, BigInt e, BigInt f);

  const BigInt& a() const { return v[0]; }
  const BigInt& b() const { return v[1]; }
  const BigInt& c() const { return v[2]; }
  const BigInt& d() const { return v[3]; }
  const BigInt& e() const { return v[4]; }
  const BigInt& f() const { return v[5]; }
  const BigInt& first(unsigned pair) const { return v.at(2 * pair); }
  const BigInt& second(unsigned pair) const { return v.at(2 * pair + 1); }

  friend bool operator==(const TriangleParams&, const TriangleParams&) = default;
};

// `a,b;c,d;e,f`, spaces allowed. Throws ParseError (zero values included).
TriangleParams parse_params(std::string_view text);
std::string format_params(const TriangleParams& p);

// Canonical order: lexicographic on the six values, each compared by
// (|v|, sign) with positive before negative.
bool canonical_less(const TriangleParams& lhs, const TriangleParams& rhs);

// Moves that give isomorphic groups. CyclicPermute sends (a,b;c,d;e,f) to
// (c,d;e,f;a,b); SwapPartners exchanges the two members of a pair (inverting
// the conjugating generator); NegatePair negates both members (inverting
// the relation). Together they generate a group of order 192.
enum class MoveKind { CyclicPermute, SwapPartners, NegatePair };

struct Move {
  MoveKind kind = MoveKind::CyclicPermute;
  unsigned pair = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

using MoveSequence = std::vector<Move>;

TriangleParams apply_move(const TriangleParams& p, const Move& m);
TriangleParams apply_moves(const TriangleParams& p, const MoveSequence& moves);
std::string format_move(const Move& m);
std::string format_moves(const MoveSequence& moves);

// All 192 move-group elements as sequences of single moves.
const std::vector<MoveSequence>& move_group();

// Orbit under the move group, sorted in canonical order.
std::vector<TriangleParams> orbit(const TriangleParams& p);

struct Canonical {
  TriangleParams params;
  MoveSequence moves;  // apply_moves(input, moves) == params
};

// Least orbit element with a shortest witnessing move sequence.
Canonical canonicalize(const TriangleParams& p);

// Rotates so `pair` comes first, replaces (a,b;c,d;e,f) by
// (a/l,b/l;c,d;e^l,f^l) and rotates back. Throws NotADivisor when l does not
// divide both members, PreconditionViolated for l < 1; nullopt on overflow.
std::optional<TriangleParams> power_reduce(const TriangleParams& p, unsigned pair,
                                           const BigInt& l,
                                           const SizeGuard& guard = SizeGuard::from_env());

// (a^2,b^2;c^2,d^2;e^2,f^2)
TriangleParams square_params(const TriangleParams& p);

struct CoprimeReduction {
  MoveSequence moves;  // sign normalization applied before reducing
  BigInt l, m, n;
  std::array<BigInt, 6> coprime;  // A,B,C,D,E,F
  // (A^m,B^m;C^(n^l),D^(n^l);E^l,F^l), or nullopt on overflow.
  std::optional<TriangleParams> reduced;
};

// Negates pairs whose first member is negative, then writes
// (a,b;c,d;e,f) = (Al,Bl;Cm,Dm;En,Fn) with l,m,n the pair gcds.
CoprimeReduction coprime_reduce(const TriangleParams& p,
                                const SizeGuard& guard = SizeGuard::from_env());

// x^lhs = z^-(R f^(T a^(S(d^R-c^R)) b^(S c^R))) y^-(S c^R) z^(R f^(T a^(S d^R))) y^(S d^R)
// with lhs = T b^(S c^R) (b^(S(d^R-c^R)) - a^(S(d^R-c^R))).
struct KillerRelation {
  BigInt R, S, T;
  bool overflow = false;  // when set, only R, S, T are meaningful
  BigInt lhs_exponent;
  Word rhs;  // in y, z
  BigInt P;      // T a^(S d^R)
  BigInt Q_exp;  // S c^R
  // z exponents of the right side: -B then D, and y exponents -C then E.
  BigInt B, C, D, E;

  // lhs word times rhs inverse.
  Word relator() const;
};

// Requires 0 < a <= b, 0 < c <= d, e = 1 <= f and R,S,T >= 1; throws
// PreconditionViolated otherwise.
KillerRelation killer_relation(const TriangleParams& p, const BigInt& R, const BigInt& S,
                               const BigInt& T, const SizeGuard& guard = SizeGuard::from_env());

// The same relation with every exponent reduced modulo the given orders of
// x, y, z in a finite quotient; nullopt when an inner exponent overflows.
std::optional<Word> killer_relator_mod(const TriangleParams& p, const BigInt& R, const BigInt& S,
                                       const BigInt& T, const std::array<BigInt, 3>& orders,
                                       const SizeGuard& guard = SizeGuard::from_env());

// Whether p satisfies the killer relation's sign and ordering conditions.
bool killer_applies(const TriangleParams& p);

// Requires a < b, c < d, e < f. Entries are absolute values, nullopt on
// overflow:
//   N_x = (b-a)^2 (b^(d-c) - a^(d-c)), N_y, N_z cyclically.
std::array<std::optional<BigInt>, 3> order_exponents(const TriangleParams& p,
                                                     const SizeGuard& guard = SizeGuard::from_env());

struct ConjugationData {
  BigInt modulus;  // N_x
  BigInt alpha;    // alpha * a == 1 mod N_x; taken as 1 when N_x == 1
  Word X, Y, Z;    // x^(b-a), y^(d-c), z^(f-e)
  // y^x = y X^-alpha, Y^x = Y x^-(alpha^(d-c) (b^(d-c)-a^(d-c))),
  // Y^X = Y X^-(alpha^(d-c) (b^(d-c)-a^(d-c))), as relators.
  Word y_by_x, Y_by_x, Y_by_X;
  // Set when the last two exponents were too large and were reduced mod N_x.
  bool reduced_mod_modulus = false;
};

// Requires a < b, c < d, e < f and gcd(a, N_x) = 1 (NotCoprime otherwise).
ConjugationData conjugation_data(const TriangleParams& p,
                                 const SizeGuard& guard = SizeGuard::from_env());

struct OrderBounds {
  std::optional<BigInt> L;  // |(b^(d-c)-a^(d-c)) (d^(f-e)-c^(f-e)) (f^(b-a)-e^(b-a))|
  std::optional<BigInt> M;  // (b-a)^2 (d-c)^2 (f-e)^2
};

// Requires a < b, c < d, e < f.
OrderBounds order_bounds(const TriangleParams& p, const SizeGuard& guard = SizeGuard::from_env());

struct FiniteOrderWitness {
  enum class Branch { FGreaterThanOne, FEqualsOne };
  Branch branch = Branch::FEqualsOne;
  bool overflow = false;
  // f > 1: x^A = z^-B y^-C z^D y^E and the divisor of the order of y.
  BigInt A, B, C, D, E, g, h;
  std::optional<BigInt> y_order_divisor;  // nullopt when B <= D or on overflow
  // f = 1: b^d - a^(d-c) b^c, a multiple of the order of x.
  BigInt x_order_divisor;
};

// Requires 0 < a < b, 0 < c < d, e = 1 <= f.
FiniteOrderWitness finite_order_witness(const TriangleParams& p,
                                        const SizeGuard& guard = SizeGuard::from_env());

}  // namespace bstri
