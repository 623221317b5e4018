#include "bstri/triangle.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "bstri/error.hpp"

namespace bstri {

namespace {

struct Overflow {};

// base^exp under the guard; Overflow instead of nullopt.
BigInt pw(const BigInt& base, const BigInt& exp, const SizeGuard& guard) {
  MaybeBig r = guarded_pow(base, exp, guard);
  if (!r) throw Overflow{};
  return *r;
}

BigInt checked(BigInt v, const SizeGuard& guard) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > guard.max_bits) throw Overflow{};
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::PreconditionViolated, what);
}

void require_ordered(const TriangleParams& p, const char* op) {
  require(p.a() < p.b() && p.c() < p.d() && p.e() < p.f(),
          std::string(op) + ": needs a < b, c < d, e < f");
}

// Rotation by k pairs to the left: k = 1 sends (a,b;c,d;e,f) to (c,d;e,f;a,b).
TriangleParams rotate(const TriangleParams& p, unsigned k) {
  TriangleParams out = p;
  for (unsigned i = 0; i < 6; ++i) out.v[i] = p.v[(i + 2 * k) % 6];
  return out;
}

int sign_rank(const BigInt& v) { return v > 0 ? 0 : 1; }

}  // namespace

TriangleParams::TriangleParams(BigInt a, BigInt b, BigInt c, BigInt d, BigInt e, BigInt f)
    : v{std::move(a), std::move(b), std::move(c), std::move(d), std::move(e), std::move(f)} {
  for (const auto& x : v) require(x != 0, "triangle parameters must be nonzero");
}

TriangleParams parse_params(std::string_view text) {
  TriangleParams p;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  for (unsigned k = 0; k < 6; ++k) {
    skip_ws();
    const std::size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    const std::size_t digits = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == digits) throw ParseError("expected an integer", start);
    p.v[k] = parse_bigint(std::string(text.substr(start, i - start)));
    if (p.v[k] == 0) throw ParseError("parameters must be nonzero", start);
    skip_ws();
    if (k == 5) break;
    const char sep = k % 2 == 0 ? ',' : ';';
    if (i >= text.size() || text[i] != sep) {
      throw ParseError(std::string("expected '") + sep + "'", i);
    }
    ++i;
  }
  if (i != text.size()) throw ParseError("trailing characters", i);
  return p;
}

std::string format_params(const TriangleParams& p) {
  std::string out;
  for (unsigned k = 0; k < 6; ++k) {
    if (k > 0) out += k % 2 == 0 ? ";" : ",";
    out += p.v[k].get_str();
  }
  return out;
}

bool canonical_less(const TriangleParams& lhs, const TriangleParams& rhs) {
  for (unsigned k = 0; k < 6; ++k) {
    const int c = mpz_cmpabs(lhs.v[k].get_mpz_t(), rhs.v[k].get_mpz_t());
    if (c != 0) return c < 0;
    const int sl = sign_rank(lhs.v[k]);
    const int sr = sign_rank(rhs.v[k]);
    if (sl != sr) return sl < sr;
  }
  return false;
}

TriangleParams apply_move(const TriangleParams& p, const Move& m) {
  require(m.pair < 3, "move pair index must be 0, 1 or 2");
  TriangleParams out = p;
  switch (m.kind) {
    case MoveKind::CyclicPermute:
      return rotate(p, 1);
    case MoveKind::SwapPartners:
      std::swap(out.v[2 * m.pair], out.v[2 * m.pair + 1]);
      return out;
    case MoveKind::NegatePair:
      out.v[2 * m.pair] = -out.v[2 * m.pair];
      out.v[2 * m.pair + 1] = -out.v[2 * m.pair + 1];
      return out;
  }
  return out;
}

TriangleParams apply_moves(const TriangleParams& p, const MoveSequence& moves) {
  TriangleParams out = p;
  for (const auto& m : moves) out = apply_move(out, m);
  return out;
}

std::string format_move(const Move& m) {
  switch (m.kind) {
    case MoveKind::CyclicPermute:
      return "CyclicPermute";
    case MoveKind::SwapPartners:
      return "SwapPartners(" + std::to_string(m.pair) + ")";
    case MoveKind::NegatePair:
      return "NegatePair(" + std::to_string(m.pair) + ")";
  }
  return "?";
}

std::string format_moves(const MoveSequence& moves) {
  std::string out;
  for (const auto& m : moves) {
    if (!out.empty()) out += ' ';
    out += format_move(m);
  }
  return out;
}

namespace {

const std::array<Move, 7>& single_moves() {
  static const std::array<Move, 7> moves{{
      {MoveKind::CyclicPermute, 0},
      {MoveKind::SwapPartners, 0},
      {MoveKind::SwapPartners, 1},
      {MoveKind::SwapPartners, 2},
      {MoveKind::NegatePair, 0},
      {MoveKind::NegatePair, 1},
      {MoveKind::NegatePair, 2},
  }};
  return moves;
}

}  // namespace

const std::vector<MoveSequence>& move_group() {
  // Breadth-first search on a generic tuple, whose stabilizer is trivial.
  static const std::vector<MoveSequence> group = [] {
    const TriangleParams probe(2, 3, 5, 7, 11, 13);
    std::vector<MoveSequence> out;
    std::vector<TriangleParams> seen{probe};
    std::deque<std::pair<TriangleParams, MoveSequence>> queue{{probe, {}}};
    while (!queue.empty()) {
      auto [q, seq] = queue.front();
      queue.pop_front();
      out.push_back(seq);
      for (const auto& m : single_moves()) {
        TriangleParams next = apply_move(q, m);
        if (std::find(seen.begin(), seen.end(), next) != seen.end()) continue;
        seen.push_back(next);
        MoveSequence s = seq;
        s.push_back(m);
        queue.emplace_back(next, std::move(s));
      }
    }
    return out;
  }();
  return group;
}

namespace {

// Each move-group element as a signed permutation of the six slots:
// entry i is s * (j + 1) when slot i of the image is s times slot j.
using SignedPerm = std::array<int, 6>;

const std::vector<SignedPerm>& move_table() {
  static const std::vector<SignedPerm> table = [] {
    const TriangleParams probe(1, 2, 3, 4, 5, 6);
    std::vector<SignedPerm> out;
    for (const auto& seq : move_group()) {
      const TriangleParams q = apply_moves(probe, seq);
      SignedPerm sp{};
      for (unsigned i = 0; i < 6; ++i) sp[i] = static_cast<int>(q.v[i].get_si());
      out.push_back(sp);
    }
    return out;
  }();
  return table;
}

TriangleParams apply_signed(const TriangleParams& p, const SignedPerm& sp) {
  TriangleParams out;
  for (unsigned i = 0; i < 6; ++i) {
    const int j = sp[i] > 0 ? sp[i] - 1 : -sp[i] - 1;
    if (sp[i] > 0)
      out.v[i] = p.v[j];
    else
      out.v[i] = -p.v[j];
  }
  return out;
}

}  // namespace

std::vector<TriangleParams> orbit(const TriangleParams& p) {
  std::vector<TriangleParams> out;
  out.reserve(move_group().size());
  for (const auto& sp : move_table()) out.push_back(apply_signed(p, sp));
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Canonical canonicalize(const TriangleParams& p) {
  // move_group() is in breadth-first order, so the first sequence reaching
  // the least tuple is a shortest one.
  const auto& table = move_table();
  TriangleParams best = p;
  std::size_t at = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    TriangleParams q = apply_signed(p, table[i]);
    if (canonical_less(q, best)) {
      best = std::move(q);
      at = i;
    }
  }
  return {std::move(best), move_group()[at]};
}

std::optional<TriangleParams> power_reduce(const TriangleParams& p, unsigned pair, const BigInt& l,
                                           const SizeGuard& guard) {
  require(pair < 3, "power_reduce: pair index must be 0, 1 or 2");
  require(l >= 1, "power_reduce: l must be positive");
  TriangleParams r = rotate(p, pair);
  if (!divides(l, r.v[0]) || !divides(l, r.v[1])) {
    throw Error(ErrorKind::NotADivisor, "power_reduce: " + l.get_str() + " does not divide both " +
                                            r.v[0].get_str() + " and " + r.v[1].get_str());
  }
  try {
    r.v[0] /= l;
    r.v[1] /= l;
    r.v[4] = pw(r.v[4], l, guard);
    r.v[5] = pw(r.v[5], l, guard);
  } catch (const Overflow&) {
    return std::nullopt;
  }
  return rotate(r, (3 - pair) % 3);
}

TriangleParams square_params(const TriangleParams& p) {
  TriangleParams out = p;
  for (auto& x : out.v) x *= x;
  return out;
}

CoprimeReduction coprime_reduce(const TriangleParams& p, const SizeGuard& guard) {
  CoprimeReduction out;
  TriangleParams q = p;
  for (unsigned i = 0; i < 3; ++i) {
    if (q.first(i) < 0) {
      const Move m{MoveKind::NegatePair, i};
      out.moves.push_back(m);
      q = apply_move(q, m);
    }
  }
  out.l = gcd(q.a(), q.b());
  out.m = gcd(q.c(), q.d());
  out.n = gcd(q.e(), q.f());
  const BigInt* g[3] = {&out.l, &out.m, &out.n};
  for (unsigned k = 0; k < 6; ++k) out.coprime[k] = q.v[k] / *g[k / 2];
  try {
    TriangleParams r;
    r.v[0] = pw(out.coprime[0], out.m, guard);
    r.v[1] = pw(out.coprime[1], out.m, guard);
    const BigInt nl = pw(out.n, out.l, guard);
    r.v[2] = pw(out.coprime[2], nl, guard);
    r.v[3] = pw(out.coprime[3], nl, guard);
    r.v[4] = pw(out.coprime[4], out.l, guard);
    r.v[5] = pw(out.coprime[5], out.l, guard);
    out.reduced = r;
  } catch (const Overflow&) {
    out.reduced.reset();
  }
  return out;
}

bool killer_applies(const TriangleParams& p) {
  return p.a() > 0 && p.a() <= p.b() && p.c() > 0 && p.c() <= p.d() && p.e() == 1 && p.f() >= 1;
}

Word KillerRelation::relator() const {
  return Word::generator(kX, lhs_exponent) * rhs.inverse();
}

KillerRelation killer_relation(const TriangleParams& p, const BigInt& R, const BigInt& S,
                               const BigInt& T, const SizeGuard& guard) {
  require(killer_applies(p), "killer_relation: needs 0 < a <= b, 0 < c <= d, e = 1 <= f");
  require(R >= 1 && S >= 1 && T >= 1, "killer_relation: R, S, T must be positive");
  KillerRelation k;
  k.R = R;
  k.S = S;
  k.T = T;
  try {
    const BigInt cR = pw(p.c(), R, guard);
    const BigInt dR = pw(p.d(), R, guard);
    const BigInt k1 = checked(S * (dR - cR), guard);
    k.Q_exp = checked(S * cR, guard);
    const BigInt bQ = pw(p.b(), k.Q_exp, guard);
    k.lhs_exponent = checked(T * bQ * (pw(p.b(), k1, guard) - pw(p.a(), k1, guard)), guard);
    const BigInt Sd = checked(S * dR, guard);
    k.P = checked(T * pw(p.a(), Sd, guard), guard);
    const BigInt outer = checked(T * pw(p.a(), k1, guard) * bQ, guard);
    k.B = checked(R * pw(p.f(), outer, guard), guard);
    k.C = k.Q_exp;
    k.D = checked(R * pw(p.f(), k.P, guard), guard);
    k.E = Sd;
    k.rhs = Word::generator(kZ, -k.B) * Word::generator(kY, -k.C) * Word::generator(kZ, k.D) *
            Word::generator(kY, k.E);
  } catch (const Overflow&) {
    k.overflow = true;
  }
  return k;
}

std::optional<Word> killer_relator_mod(const TriangleParams& p, const BigInt& R, const BigInt& S,
                                       const BigInt& T, const std::array<BigInt, 3>& orders,
                                       const SizeGuard& guard) {
  require(killer_applies(p), "killer_relation: needs 0 < a <= b, 0 < c <= d, e = 1 <= f");
  require(R >= 1 && S >= 1 && T >= 1, "killer_relation: R, S, T must be positive");
  for (const auto& o : orders) require(o >= 1, "killer_relator_mod: orders must be positive");
  const BigInt& ox = orders[0];
  const BigInt& oy = orders[1];
  const BigInt& oz = orders[2];
  try {
    const BigInt cR = pw(p.c(), R, guard);
    const BigInt dR = pw(p.d(), R, guard);
    const BigInt k1 = checked(S * (dR - cR), guard);
    const BigInt Qexp = checked(S * cR, guard);
    const BigInt Sd = checked(S * dR, guard);
    const BigInt lhs =
        mod(T * pow_mod(p.b(), Qexp, ox) * (pow_mod(p.b(), k1, ox) - pow_mod(p.a(), k1, ox)), ox);
    // Exponents of f are needed exactly; f's powers only modulo ord(z).
    const BigInt outer = checked(T * pw(p.a(), k1, guard) * pw(p.b(), Qexp, guard), guard);
    const BigInt P = checked(T * pw(p.a(), Sd, guard), guard);
    const BigInt B = mod(R * pow_mod(p.f(), outer, oz), oz);
    const BigInt D = mod(R * pow_mod(p.f(), P, oz), oz);
    const BigInt C = mod(Qexp, oy);
    const BigInt E = mod(Sd, oy);
    const Word rhs = Word::generator(kZ, -B) * Word::generator(kY, -C) * Word::generator(kZ, D) *
                     Word::generator(kY, E);
    return Word::generator(kX, lhs) * rhs.inverse();
  } catch (const Overflow&) {
    return std::nullopt;
  }
}

std::array<std::optional<BigInt>, 3> order_exponents(const TriangleParams& p,
                                                     const SizeGuard& guard) {
  require_ordered(p, "order_exponents");
  std::array<std::optional<BigInt>, 3> out;
  for (unsigned i = 0; i < 3; ++i) {
    const TriangleParams r = rotate(p, i);
    try {
      const BigInt k = r.d() - r.c();
      const BigInt diff = r.b() - r.a();
      out[i] = abs(checked(diff * diff * (pw(r.b(), k, guard) - pw(r.a(), k, guard)), guard));
    } catch (const Overflow&) {
      out[i].reset();
    }
  }
  return out;
}

ConjugationData conjugation_data(const TriangleParams& p, const SizeGuard& guard) {
  require_ordered(p, "conjugation_data");
  const auto n = order_exponents(p, guard);
  if (!n[0]) throw Error(ErrorKind::PreconditionViolated, "conjugation_data: N_x overflows");
  ConjugationData cd;
  cd.modulus = *n[0];
  if (cd.modulus == 0) throw Error(ErrorKind::PreconditionViolated, "conjugation_data: N_x is 0");
  cd.alpha = cd.modulus == 1 ? BigInt(1) : mod_inverse(p.a(), cd.modulus);
  const BigInt ba = p.b() - p.a();
  const BigInt dc = p.d() - p.c();
  cd.X = Word::generator(kX, ba);
  cd.Y = Word::generator(kY, dc);
  cd.Z = Word::generator(kZ, p.f() - p.e());
  const Word x = Word::generator(kX);
  const Word xi = Word::generator(kX, -1);
  const Word y = Word::generator(kY);
  cd.y_by_x = xi * y * x * Word::generator(kX, cd.alpha * ba) * y.inverse();
  BigInt k;
  try {
    k = checked(pw(cd.alpha, dc, guard) * (pw(p.b(), dc, guard) - pw(p.a(), dc, guard)), guard);
  } catch (const Overflow&) {
    k = mod(pow_mod(cd.alpha, dc, cd.modulus) *
                (pow_mod(p.b(), dc, cd.modulus) - pow_mod(p.a(), dc, cd.modulus)),
            cd.modulus);
    cd.reduced_mod_modulus = true;
  }
  cd.Y_by_x = xi * cd.Y * x * Word::generator(kX, k) * cd.Y.inverse();
  cd.Y_by_X = cd.X.inverse() * cd.Y * cd.X * Word::generator(kX, k * ba) * cd.Y.inverse();
  return cd;
}

OrderBounds order_bounds(const TriangleParams& p, const SizeGuard& guard) {
  require_ordered(p, "order_bounds");
  OrderBounds out;
  try {
    BigInt L = 1;
    for (unsigned i = 0; i < 3; ++i) {
      const TriangleParams r = rotate(p, i);
      const BigInt k = r.d() - r.c();
      L = checked(L * (pw(r.b(), k, guard) - pw(r.a(), k, guard)), guard);
    }
    out.L = abs(L);
  } catch (const Overflow&) {
    out.L.reset();
  }
  try {
    const BigInt m = (p.b() - p.a()) * (p.d() - p.c()) * (p.f() - p.e());
    out.M = checked(m * m, guard);
  } catch (const Overflow&) {
    out.M.reset();
  }
  return out;
}

FiniteOrderWitness finite_order_witness(const TriangleParams& p, const SizeGuard& guard) {
  require(p.a() > 0 && p.a() < p.b() && p.c() > 0 && p.c() < p.d() && p.e() == 1 && p.f() >= 1,
          "finite_order_witness: needs 0 < a < b, 0 < c < d, e = 1 <= f");
  FiniteOrderWitness w;
  const BigInt& a = p.a();
  const BigInt& b = p.b();
  const BigInt& c = p.c();
  const BigInt& d = p.d();
  const BigInt& f = p.f();
  try {
    if (f == 1) {
      w.branch = FiniteOrderWitness::Branch::FEqualsOne;
      w.x_order_divisor = checked(pw(b, d, guard) - pw(a, d - c, guard) * pw(b, c, guard), guard);
      return w;
    }
    w.branch = FiniteOrderWitness::Branch::FGreaterThanOne;
    const BigInt bc = pw(b, c, guard);
    w.A = checked(bc * (pw(b, d - c, guard) - pw(a, d - c, guard)), guard);
    w.B = pw(f, checked(pw(a, d - c, guard) * bc, guard), guard);
    w.C = c;
    w.D = pw(f, pw(a, d, guard), guard);
    w.E = d;
    w.g = pw(d, w.B, guard);
    if (w.B <= w.D) return w;
    w.h = checked(pw(c, w.B - w.D, guard) * pw(d, w.D, guard), guard);
    const BigInt fa = pw(f, w.A, guard) - 1;
    w.y_order_divisor = checked(w.h * d * (pw(d, fa, guard) - pw(c, fa, guard)), guard);
  } catch (const Overflow&) {
    w.overflow = true;
    w.y_order_divisor.reset();
  }
  return w;
}

}  // namespace bstri
