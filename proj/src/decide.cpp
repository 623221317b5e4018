#include "bstri/decide.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "bstri/error.hpp"

namespace bstri {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Developable:
      return "Developable";
    case Outcome::NotDevelopable:
      return "NotDevelopable";
    case Outcome::Unknown:
      return "Unknown";
  }
  return "?";
}

std::string_view to_string(Family f) {
  static constexpr std::string_view names[] = {"SC1", "SC2", "SC3", "SC4", "SC5"};
  return names[static_cast<int>(f)];
}

std::string_view to_string(CoprimeCase c) {
  static constexpr std::string_view names[] = {"CP1", "CP2", "CP3"};
  return names[static_cast<int>(c)];
}

std::string_view to_string(Finiteness f) {
  switch (f) {
    case Finiteness::Finite:
      return "Finite";
    case Finiteness::Infinite:
      return "Infinite";
    case Finiteness::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

bool even(const BigInt& v) { return mpz_even_p(v.get_mpz_t()) != 0; }

std::string_view family_pattern(Family f) {
  switch (f) {
    case Family::SC1:
      return "(a,-a;c,-c;e,-e)";
    case Family::SC2:
      return "(a,b;c,c;e,e)";
    case Family::SC3:
      return "(a,b;c,c;e,-e) with a = b mod 2";
    case Family::SC4:
      return "(a,b;c,-c;e,e) with e even";
    case Family::SC5:
      return "(a,b;c,-c;e,-e) with e even and a = b mod 2";
  }
  return "";
}

std::string_view case_pattern(CoprimeCase c) {
  switch (c) {
    case CoprimeCase::CP1:
      return "(1,-1;1,-1;1,-1)";
    case CoprimeCase::CP2:
      return "(a,b;1,1;1,1)";
    case CoprimeCase::CP3:
      return "(a,b;1,1;1,-1) with a, b odd";
  }
  return "";
}

std::string via(const MoveSequence& moves) {
  return moves.empty() ? std::string("directly") : "via " + format_moves(moves);
}

template <typename Tag, typename Match>
std::optional<OrbitMatch<Tag>> first_in_orbit(const TriangleParams& p, std::initializer_list<Tag> tags,
                                              Match match) {
  // Tags in order, and for each the shortest witnessing move sequence.
  for (Tag t : tags) {
    for (const auto& seq : move_group()) {
      TriangleParams q = apply_moves(p, seq);
      if (match(q, t)) return OrbitMatch<Tag>{t, seq, std::move(q)};
    }
  }
  return std::nullopt;
}

bool pairs_coprime(const TriangleParams& p) {
  for (unsigned i = 0; i < 3; ++i)
    if (gcd(p.first(i), p.second(i)) != 1) return false;
  return true;
}

bool has_unit(const TriangleParams& p) {
  return std::any_of(p.v.begin(), p.v.end(), [](const BigInt& x) { return abs(x) == 1; });
}

bool is_unit_pair(const TriangleParams& p, unsigned i) {
  return abs(p.first(i)) == 1 && abs(p.second(i)) == 1;
}

std::string orbit_size_text(const TriangleParams& p) {
  return "orbit of size " + std::to_string(orbit(p).size());
}

}  // namespace

bool matches_family(const TriangleParams& p, Family f) {
  switch (f) {
    case Family::SC1:
      return p.b() == -p.a() && p.d() == -p.c() && p.f() == -p.e();
    case Family::SC2:
      return p.d() == p.c() && p.f() == p.e();
    case Family::SC3:
      return p.d() == p.c() && p.f() == -p.e() && even(p.a() - p.b());
    case Family::SC4:
      return p.d() == -p.c() && p.f() == p.e() && even(p.e());
    case Family::SC5:
      return p.d() == -p.c() && p.f() == -p.e() && even(p.e()) && even(p.a() - p.b());
  }
  return false;
}

bool matches_coprime_case(const TriangleParams& p, CoprimeCase c) {
  switch (c) {
    case CoprimeCase::CP1:
      return p == TriangleParams(1, -1, 1, -1, 1, -1);
    case CoprimeCase::CP2:
      return p.c() == 1 && p.d() == 1 && p.e() == 1 && p.f() == 1;
    case CoprimeCase::CP3:
      return p.c() == 1 && p.d() == 1 && p.e() == 1 && p.f() == -1 && !even(p.a()) &&
             !even(p.b());
  }
  return false;
}

std::optional<OrbitMatch<Family>> find_family(const TriangleParams& p) {
  return first_in_orbit<Family>(
      p, {Family::SC1, Family::SC2, Family::SC3, Family::SC4, Family::SC5},
      [](const TriangleParams& q, Family f) { return matches_family(q, f); });
}

std::optional<OrbitMatch<CoprimeCase>> find_coprime_case(const TriangleParams& p) {
  return first_in_orbit<CoprimeCase>(
      p, {CoprimeCase::CP1, CoprimeCase::CP2, CoprimeCase::CP3},
      [](const TriangleParams& q, CoprimeCase c) { return matches_coprime_case(q, c); });
}

namespace {

// Move sequence bringing a dividing parameter to position a.
std::optional<std::pair<MoveSequence, TriangleParams>> divisibility_witness(const TriangleParams& p) {
  for (const auto& seq : move_group()) {
    TriangleParams q = apply_moves(p, seq);
    if (divides(q.a(), q.b())) return std::make_pair(seq, std::move(q));
  }
  return std::nullopt;
}

}  // namespace

bool has_divisibility(const TriangleParams& p) { return divisibility_witness(p).has_value(); }

const std::vector<KnownFact>& known_facts() {
  static const std::vector<KnownFact> facts = {
      {TriangleParams(2, 3, 2, 3, 2, 3), "reported-infinite",
       "shown infinite by confluent rewriting systems (external computation)"},
      {TriangleParams(3, 4, 3, 4, 3, 4), "reported-infinite",
       "shown infinite by confluent rewriting systems (external computation)"},
  };
  return facts;
}

std::vector<std::string> annotations_for(const TriangleParams& p) {
  std::vector<std::string> out;
  const TriangleParams c = canonicalize(p).params;
  for (const auto& fact : known_facts()) {
    if (canonicalize(fact.params).params == c)
      out.push_back(fact.tag + ": " + format_params(fact.params) + " " + fact.citation);
  }
  return out;
}

Verdict coprime_classify(const TriangleParams& p) {
  if (!pairs_coprime(p))
    throw Error(ErrorKind::PreconditionViolated,
                "coprime_classify: every pair must be coprime, got " + format_params(p));
  if (!has_unit(p))
    throw Error(ErrorKind::PreconditionViolated,
                "coprime_classify: some parameter must be +-1, got " + format_params(p));
  Verdict v;
  if (auto m = find_coprime_case(p)) {
    v.outcome = Outcome::Developable;
    v.family = std::string(to_string(m->tag));
    v.evidence.push_back({std::string(to_string(m->tag)),
                          "orbit meets " + std::string(case_pattern(m->tag)) + " at " +
                              format_params(m->matched) + " " + via(m->moves),
                          m->matched});
  } else {
    v.outcome = Outcome::NotDevelopable;
    v.evidence.push_back({"coprime-classification",
                          "coprime pairs with a parameter +-1; " + orbit_size_text(p) +
                              " meets none of CP1 " + std::string(case_pattern(CoprimeCase::CP1)) +
                              ", CP2 " + std::string(case_pattern(CoprimeCase::CP2)) + ", CP3 " +
                              std::string(case_pattern(CoprimeCase::CP3)),
                          std::nullopt});
  }
  v.annotations = annotations_for(p);
  return v;
}

Verdict decide(const TriangleParams& p, const SizeGuard& guard) {
  Verdict v;
  v.annotations = annotations_for(p);
  const auto witness = divisibility_witness(p);
  if (!witness) {
    v.outcome = Outcome::Unknown;
    v.evidence.push_back({"divisibility",
                          "no parameter divides its partner anywhere in the " + orbit_size_text(p),
                          std::nullopt});
  } else {
    const auto& [seq, q] = *witness;
    v.evidence.push_back({"divisibility",
                          q.a().get_str() + " divides " + q.b().get_str() + " in " +
                              format_params(q) + " " + via(seq),
                          q});
    if (auto m = find_family(p)) {
      v.outcome = Outcome::Developable;
      v.family = std::string(to_string(m->tag));
      v.evidence.push_back({std::string(to_string(m->tag)),
                            "orbit meets " + std::string(family_pattern(m->tag)) + " at " +
                                format_params(m->matched) + " " + via(m->moves),
                            m->matched});
    } else {
      v.outcome = Outcome::NotDevelopable;
      v.evidence.push_back(
          {"divisibility", "the " + orbit_size_text(p) + " meets none of SC1..SC5", std::nullopt});
    }
  }

  // Second route: the coprime reduction has a parameter +-1 exactly when
  // some parameter divides its partner, and is then classified directly.
  const CoprimeReduction cr = coprime_reduce(p, guard);
  if (!cr.reduced) {
    v.evidence.push_back({"coprime-reduction",
                          "gcds (" + cr.l.get_str() + ", " + cr.m.get_str() + ", " + cr.n.get_str() +
                              "); reduced tuple overflows, cross-check skipped",
                          std::nullopt});
    return v;
  }
  v.evidence.push_back({"coprime-reduction",
                        "gcds (" + cr.l.get_str() + ", " + cr.m.get_str() + ", " + cr.n.get_str() +
                            ") after " + (cr.moves.empty() ? "no moves" : format_moves(cr.moves)) +
                            " give " + format_params(*cr.reduced),
                        cr.reduced});
  if (v.outcome == Outcome::Unknown) return v;
  if (!has_unit(*cr.reduced) || !pairs_coprime(*cr.reduced)) {
    v.evidence.push_back({"cross-check", "reduced tuple outside the coprime classification",
                          std::nullopt});
    return v;
  }
  const Verdict second = coprime_classify(*cr.reduced);
  const bool agree = second.outcome == v.outcome;
  std::string detail = std::string(agree ? "agrees" : "DISAGREES") + ": coprime classification of " +
                       format_params(*cr.reduced) + " gives " + std::string(to_string(second.outcome));
  if (second.family) detail += " (" + *second.family + ")";
  v.evidence.push_back({"cross-check", detail, std::nullopt});
  return v;
}

Verdict decide_with_reduction_search(const TriangleParams& p, unsigned depth,
                                     const SizeGuard& guard) {
  if (depth > kMaxSearchDepth)
    throw Error(ErrorKind::PreconditionViolated,
                "reduction search depth " + std::to_string(depth) + " exceeds " +
                    std::to_string(kMaxSearchDepth));

  struct Node {
    TriangleParams params;
    std::vector<EvidenceStep> path;
  };
  // Power reductions by a prime dividing a pair; composites are chains of these.
  auto children = [&](const Node& n) {
    std::vector<Node> out;
    for (unsigned i = 0; i < 3; ++i) {
      const BigInt g = gcd(n.params.first(i), n.params.second(i));
      if (g == 1) continue;
      std::vector<BigInt> primes;
      try {
        primes = prime_divisors(g);
      } catch (const Error&) {
        continue;
      }
      for (const auto& l : primes) {
        const auto r = power_reduce(n.params, i, l, guard);
        if (!r) continue;
        Node c{*r, n.path};
        c.path.push_back({"power-reduce",
                          "pair " + std::to_string(i) + " by " + l.get_str() + ": " +
                              format_params(n.params) + " -> " + format_params(*r),
                          *r});
        out.push_back(std::move(c));
      }
    }
    return out;
  };

  Verdict v = decide(p, guard);
  if (v.outcome != Outcome::Unknown) {
    // Already decided; a reduction, when one exists, is recorded as corroboration.
    if (depth >= 1) {
      for (auto& c : children(Node{p, {}})) {
        const Verdict w = decide(c.params, guard);
        if (w.outcome == Outcome::Unknown) continue;
        EvidenceStep step = c.path.back();
        step.detail += std::string(w.outcome == v.outcome ? ", agrees: " : ", DISAGREES: ") +
                       std::string(to_string(w.outcome));
        v.evidence.push_back(std::move(step));
        break;
      }
    }
    return v;
  }

  std::vector<Node> frontier{{p, {}}};
  std::set<std::string> seen{format_params(canonicalize(p).params)};
  for (unsigned step = 1; step <= depth && !frontier.empty(); ++step) {
    std::vector<Node> next;
    for (const auto& n : frontier) {
      for (auto& c : children(n)) {
        if (!seen.insert(format_params(canonicalize(c.params).params)).second) continue;
        Verdict w = decide(c.params, guard);
        if (w.outcome != Outcome::Unknown) {
          Verdict out;
          out.outcome = w.outcome;
          out.family = w.family;
          out.evidence = c.path;
          out.evidence.insert(out.evidence.end(), w.evidence.begin(), w.evidence.end());
          out.annotations = annotations_for(p);
          return out;
        }
        next.push_back(std::move(c));
      }
    }
    frontier = std::move(next);
  }
  std::string explored;
  for (const auto& s : seen) explored += (explored.empty() ? "" : " ") + s;
  v.evidence.push_back({"reduction-search",
                        "depth " + std::to_string(depth) + ", explored " +
                            std::to_string(seen.size()) + " tuple(s) up to moves: " + explored,
                        std::nullopt});
  return v;
}

FinitenessVerdict finiteness_verdict(const TriangleParams& p) {
  FinitenessVerdict out;
  out.annotations = annotations_for(p);
  if (auto m = find_family(p)) {
    out.outcome = Finiteness::Infinite;
    out.evidence.push_back({std::string(to_string(m->tag)),
                            "orbit meets the developable family " +
                                std::string(family_pattern(m->tag)) + " at " +
                                format_params(m->matched) +
                                "; the vertex groups embed, so G is infinite",
                            m->matched});
    return out;
  }
  if (!pairs_coprime(p)) {
    out.evidence.push_back({"finiteness", "some pair is not coprime", std::nullopt});
    return out;
  }
  for (unsigned i = 0; i < 3; ++i) {
    if (is_unit_pair(p, i)) {
      out.evidence.push_back(
          {"finiteness", "pair " + std::to_string(i) + " is (+-1,+-1)", std::nullopt});
      return out;
    }
  }
  if (!has_unit(p)) {
    out.evidence.push_back(
        {"finiteness", "coprime pairs but no parameter is +-1; finiteness is open", std::nullopt});
    return out;
  }
  out.outcome = Finiteness::Finite;
  out.evidence.push_back({"finiteness",
                          "coprime pairs, none (+-1,+-1), and a parameter +-1: G equals its "
                          "universal finite-order quotient Q, which is finite and solvable",
                          std::nullopt});
  return out;
}

// ---- Q and Q_p ---------------------------------------------------------------

void check_quotient_hypotheses(const TriangleParams& p) {
  static constexpr const char* names[] = {"(a,b)", "(c,d)", "(e,f)"};
  for (unsigned i = 0; i < 3; ++i) {
    if (gcd(p.first(i), p.second(i)) != 1)
      throw Error(ErrorKind::PreconditionViolated,
                  std::string("pair ") + names[i] + " = (" + p.first(i).get_str() + "," +
                      p.second(i).get_str() + ") violates \"gcd of each pair is 1\"");
    if (is_unit_pair(p, i))
      throw Error(ErrorKind::PreconditionViolated,
                  std::string("pair ") + names[i] + " = (" + p.first(i).get_str() + "," +
                      p.second(i).get_str() +
                      ") violates \"none of the three pairs is (+-1,+-1)\"");
  }
}

NormalizedParams normalize_for_quotient(const TriangleParams& p) {
  check_quotient_hypotheses(p);
  NormalizedParams out{p, {}};
  for (unsigned i = 0; i < 3; ++i) {
    if (out.params.first(i) > out.params.second(i)) {
      const Move m{MoveKind::SwapPartners, i};
      out.moves.push_back(m);
      out.params = apply_move(out.params, m);
    }
  }
  return out;
}

namespace {

std::array<BigInt, 3> exponents_or_refuse(const TriangleParams& q, const SizeGuard& guard) {
  const auto n = order_exponents(q, guard);
  std::array<BigInt, 3> out;
  for (unsigned i = 0; i < 3; ++i) {
    if (!n[i])
      throw Error(ErrorKind::PreconditionViolated,
                  "order exponent " + std::string(1, "xyz"[i]) + " exceeds the size guard");
    out[i] = *n[i];
  }
  return out;
}

Presentation presentation_with_orders(const TriangleParams& q, const std::array<BigInt, 3>& n) {
  Presentation pres;
  pres.alphabet = Alphabet({"x", "y", "z"});
  pres.relators.push_back(conjugation_relator(kX, q.a(), kY, q.b()));
  pres.relators.push_back(conjugation_relator(kY, q.c(), kZ, q.d()));
  pres.relators.push_back(conjugation_relator(kZ, q.e(), kX, q.f()));
  for (GenId g = 0; g < 3; ++g) pres.relators.push_back(Word::generator(g, n[g]));
  return pres;
}

std::array<BigInt, 3> prime_parts(const std::array<BigInt, 3>& n, const BigInt& prime) {
  std::array<BigInt, 3> out;
  for (unsigned i = 0; i < 3; ++i) out[i] = p_part(n[i], prime);
  return out;
}

}  // namespace

Presentation build_Q(const TriangleParams& p, const SizeGuard& guard) {
  const TriangleParams q = normalize_for_quotient(p).params;
  return presentation_with_orders(q, exponents_or_refuse(q, guard));
}

Presentation build_Qp(const TriangleParams& p, const BigInt& prime, const SizeGuard& guard) {
  if (!is_prime(prime)) throw Error(ErrorKind::NotPrime, prime.get_str() + " is not prime");
  const TriangleParams q = normalize_for_quotient(p).params;
  return presentation_with_orders(q, prime_parts(exponents_or_refuse(q, guard), prime));
}

QuotientEnumeration enumerate_quotient(const Presentation& pres, const BigInt& x_order_multiple,
                                       const AnalysisOptions& options) {
  QuotientEnumeration out;
  const BigInt cap = BigInt(1) << 62;
  if (x_order_multiple >= 1 && x_order_multiple <= cap) {
    out.method = "cyclic-subgroup x";
    CyclicEnumeration e = enumerate_cyclic(pres, Word::generator(kX), to_u64(x_order_multiple),
                                           options.limits, options.strategy);
    out.stats = e.table.stats();
    if (!e.table.complete()) {
      out.overflow_reason = e.table.overflow_reason();
      return out;
    }
    out.complete = true;
    out.order = group_order(e);
    if (out.order <= options.max_eval_degree)
      out.regular = induced_regular_table(e, options.max_eval_degree);
    out.cyclic = std::move(e);
    return out;
  }
  out.method = "regular";
  CosetTable t = enumerate(pres, {}, options.limits, options.strategy);
  out.stats = t.stats();
  if (!t.complete()) {
    out.overflow_reason = t.overflow_reason();
    return out;
  }
  out.complete = true;
  out.order = t.coset_count();
  if (out.order <= options.max_eval_degree) out.regular = std::move(t);
  return out;
}

namespace {

Word relabel(const Word& w, unsigned shift) {
  std::vector<Syllable> s = w.syllables();
  for (auto& x : s) x.gen = static_cast<GenId>((x.gen + shift) % 3);
  return Word(std::move(s));
}

struct CoreCandidate {
  GenId gen = 0;
  std::uint64_t m = 0;
  BigInt kernel;
  BigInt degree;
  std::optional<CyclicEnumeration> owned;
  const CyclicEnumeration* e = nullptr;
};

// Structure of Q itself when its regular action fits, otherwise of the
// largest available quotient Q / core(<h>) for h among x, y, z.
void fill_structure(QuotientReport& r, const Presentation& pres, const QuotientEnumeration& qe,
                    const std::array<BigInt, 3>& orders_multiple, const AnalysisOptions& options) {
  try {
    if (qe.regular && r.order <= options.group.max_degree) {
      PermGroup g = PermGroup::regular(*qe.regular, options.group);
      r.structure = StructureInfo{structure_report(g, options.group), "regular", true, 1};
      return;
    }
    if (!qe.cyclic) {
      r.structure_note = "order " + r.order.get_str() + " exceeds max degree " +
                         std::to_string(options.group.max_degree) +
                         " and no cyclic enumeration is available";
      return;
    }
    const BigInt cap = BigInt(1) << 62;
    std::optional<CoreCandidate> best;
    for (GenId g = 0; g < 3; ++g) {
      CoreCandidate c;
      c.gen = g;
      if (g == kX) {
        c.e = &*qe.cyclic;
      } else {
        if (orders_multiple[g] < 1 || orders_multiple[g] > cap) continue;
        c.owned = enumerate_cyclic(pres, Word::generator(g), to_u64(orders_multiple[g]),
                                   options.limits, options.strategy);
        if (!c.owned->table.complete()) continue;
        c.e = &*c.owned;
      }
      c.m = core_exponent(*c.e, Word::generator(g));
      c.kernel = BigInt(static_cast<unsigned long>(c.e->generator_order / c.m));
      c.degree = BigInt(static_cast<unsigned long>(c.e->table.coset_count())) *
                 BigInt(static_cast<unsigned long>(c.m));
      if (c.degree > options.group.max_degree) continue;
      if (!best || c.kernel < best->kernel) best = std::move(c);
    }
    if (!best) {
      r.structure_note = "no quotient by the core of <x>, <y> or <z> fits max degree " +
                         std::to_string(options.group.max_degree);
      return;
    }
    const CosetTable t = power_subgroup_table(*best->e, best->m, options.group.max_degree);
    std::vector<Perm> gens;
    for (GenId g = 0; g < 3; ++g) gens.push_back(permutation_image(t, g));
    PermGroup q(t.coset_count(), std::move(gens), true, options.group);
    const std::string h(1, "xyz"[best->gen]);
    r.structure = StructureInfo{structure_report(q, options.group),
                                "quotient by core of <" + h + ">", false, best->kernel};
    r.structure_note = "order " + r.order.get_str() + " exceeds max degree " +
                       std::to_string(options.group.max_degree) +
                       "; structure is of Q / core(<" + h + ">), kernel order " +
                       best->kernel.get_str();
  } catch (const Error& e) {
    r.structure.reset();
    r.structure_note = e.what();
  }
}

void fill_relation_checks(QuotientReport& r, const QuotientEnumeration& qe,
                          const AnalysisOptions& options) {
  if (!qe.regular) {
    r.relation_checks.push_back({"relations", std::nullopt,
                                 "order " + r.order.get_str() + " exceeds evaluation degree " +
                                     std::to_string(options.max_eval_degree)});
    return;
  }
  const WordEvaluator ev(*qe.regular);
  auto trivial = [&](const Word& w) { return ev.apply(0, w) == 0; };

  const auto& orders = *r.element_orders;
  bool divides_all = true;
  for (unsigned i = 0; i < 3; ++i) divides_all = divides_all && divides(orders[i], r.order_relators[i]);
  r.relation_checks.push_back({"element orders divide order exponents", divides_all, ""});

  const BigInt one = 1;
  bool any_killer = false;
  TriangleParams rot = r.params;
  for (unsigned k = 0; k < 3; ++k) {
    if (killer_applies(rot)) {
      any_killer = true;
      const std::array<BigInt, 3> ro{orders[k % 3], orders[(k + 1) % 3], orders[(k + 2) % 3]};
      static constexpr const char* gens[] = {"x, y, z", "y, z, x", "z, x, y"};
      const std::string name =
          "killer R=S=T=1 on " + format_params(rot) + " in " + gens[k];
      const auto w = killer_relator_mod(rot, one, one, one, ro, options.guard);
      if (w)
        r.relation_checks.push_back({name, trivial(relabel(*w, k)), ""});
      else
        r.relation_checks.push_back({name, std::nullopt, "exponent overflow"});
    }
    rot = apply_move(rot, {MoveKind::CyclicPermute, 0});
  }
  if (!any_killer)
    r.relation_checks.push_back(
        {"killer R=S=T=1", std::nullopt, "no rotation has 0 < a <= b, 0 < c <= d, e = 1"});

  try {
    const ConjugationData cd = conjugation_data(r.params, options.guard);
    const std::string note = cd.reduced_mod_modulus ? "exponent reduced mod N_x" : "";
    r.relation_checks.push_back({"y^x = y X^-alpha", trivial(cd.y_by_x), ""});
    r.relation_checks.push_back({"Y^x = Y x^-k", trivial(cd.Y_by_x), note});
    r.relation_checks.push_back({"Y^X = Y X^-k", trivial(cd.Y_by_X), note});
  } catch (const Error& e) {
    r.relation_checks.push_back({"conjugation relators", std::nullopt, e.what()});
  }
}

QuotientReport analyze(const TriangleParams& p, const std::optional<BigInt>& prime,
                       const AnalysisOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  QuotientReport r;
  r.input = p;
  const NormalizedParams np = normalize_for_quotient(p);
  r.params = np.params;
  r.moves = np.moves;
  r.prime = prime;
  const std::array<BigInt, 3> full = exponents_or_refuse(r.params, options.guard);
  if (prime) {
    if (!is_prime(*prime)) throw Error(ErrorKind::NotPrime, prime->get_str() + " is not prime");
    r.order_relators = prime_parts(full, *prime);
  } else {
    r.order_relators = full;
  }
  const Presentation pres = presentation_with_orders(r.params, r.order_relators);
  r.abelian_invariants = abelianization(pres);
  if (!prime) {
    const OrderBounds ob = order_bounds(r.params, options.guard);
    r.bounds = BoundCheck{ob.L, ob.M, std::nullopt, false, false};
  }

  const QuotientEnumeration qe = enumerate_quotient(pres, r.order_relators[0], options);
  r.method = qe.method;
  r.stats = qe.stats;
  r.complete = qe.complete;
  r.overflow_reason = qe.overflow_reason;
  auto finish = [&] {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  if (!qe.complete) return finish();
  r.order = qe.order;

  if (r.bounds && r.bounds->L && *r.bounds->L != 0) {
    auto& b = *r.bounds;
    b.L_divides_order = divides(*b.L, r.order);
    if (b.L_divides_order) {
      b.ratio = r.order / *b.L;
      b.ratio_divides_M = b.M && divides(*b.ratio, *b.M);
    }
  }

  if (qe.regular) {
    std::array<BigInt, 3> orders;
    for (GenId g = 0; g < 3; ++g) orders[g] = element_order(*qe.regular, Word::generator(g));
    r.element_orders = orders;
  }
  fill_structure(r, pres, qe, r.order_relators, options);
  fill_relation_checks(r, qe, options);

  if (!prime && options.per_prime) {
    std::vector<BigInt> primes;
    try {
      primes = prime_divisors(full[0] * full[1] * full[2]);
    } catch (const Error&) {
      primes = prime_divisors(r.order);
    }
    AnalysisOptions sub = options;
    sub.per_prime = false;
    const auto& ab = r.abelian_invariants;
    for (const auto& q : primes) {
      PrimeReport pr;
      pr.prime = q;
      pr.criterion_expected = !(divides(q, r.params.b() - r.params.a()) &&
                                divides(q, r.params.d() - r.params.c()) &&
                                divides(q, r.params.f() - r.params.e()));
      const QuotientReport qr = analyze(p, q, sub);
      pr.complete = qr.complete;
      if (!qr.complete) {
        pr.note = "enumeration overflowed: " + qr.overflow_reason;
        r.per_prime.push_back(std::move(pr));
        continue;
      }
      pr.order = qr.order;
      pr.order_divides_Q = divides(qr.order, r.order);
      if (r.structure && r.structure->faithful && r.structure->report.nilpotency_class_of_derived) {
        pr.sylow_of_derived_abelian = true;
        for (const auto& s : r.structure->report.derived_sylows)
          if (s.prime == q) pr.sylow_of_derived_abelian = s.abelian;
      }
      if (qr.structure) {
        const bool abelian = qr.structure->report.is_derived_abelian;
        if (qr.structure->faithful || !abelian) pr.derived_abelian = abelian;
      }
      if (!pr.derived_abelian) pr.note = qr.structure_note;
      if (auto abo = ab.order(); abo && divides(*abo, r.order)) {
        pr.structural_order = *abo * p_part(r.order / *abo, q);
        pr.matches_structural = *pr.structural_order == qr.order;
      }
      r.per_prime.push_back(std::move(pr));
    }
  }
  return finish();
}

}  // namespace

QuotientReport analyze_Q(const TriangleParams& p, const AnalysisOptions& options) {
  return analyze(p, std::nullopt, options);
}

QuotientReport analyze_Qp(const TriangleParams& p, const BigInt& prime,
                          const AnalysisOptions& options) {
  AnalysisOptions o = options;
  o.per_prime = false;
  return analyze(p, prime, o);
}

CriterionResult check_p_criterion(const TriangleParams& p, const BigInt& prime,
                                  const AnalysisOptions& options) {
  const TriangleParams q = normalize_for_quotient(p).params;
  CriterionResult out;
  out.expected_abelian = !(divides(prime, q.b() - q.a()) && divides(prime, q.d() - q.c()) &&
                           divides(prime, q.f() - q.e()));
  const QuotientReport r = analyze_Qp(p, prime, options);
  if (r.structure) {
    const bool abelian = r.structure->report.is_derived_abelian;
    if (r.structure->faithful || !abelian) out.computed_abelian = abelian;
  }
  return out;
}

// ---- Euclidean case ----------------------------------------------------------

Affine affine_compose(const Affine& first, const Affine& then) {
  Affine out;
  for (int i = 0; i < 3; ++i) {
    std::int64_t t = then.t[i];
    for (int k = 0; k < 3; ++k) {
      t += then.A[i][k] * first.t[k];
      for (int j = 0; j < 3; ++j) out.A[i][j] += then.A[i][k] * first.A[k][j];
    }
    out.t[i] = t;
  }
  return out;
}

Affine affine_inverse(const Affine& g) {
  Affine out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.A[i][j] = g.A[j][i];
  for (int i = 0; i < 3; ++i) {
    std::int64_t t = 0;
    for (int k = 0; k < 3; ++k) t -= out.A[i][k] * g.t[k];
    out.t[i] = t;
  }
  // Signed permutation matrices are orthogonal; anything else is rejected.
  if (!(affine_compose(g, out) == Affine{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, {0, 0, 0}}))
    throw Error(ErrorKind::PreconditionViolated, "affine_inverse: linear part is not orthogonal");
  return out;
}

namespace {

int integer_rank(std::array<std::array<std::int64_t, 3>, 3> m) {
  int rank = 0;
  for (int col = 0; col < 3 && rank < 3; ++col) {
    int piv = -1;
    for (int r = rank; r < 3; ++r)
      if (m[r][col] != 0) piv = r;
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int r = 0; r < 3; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const std::int64_t a = m[rank][col], b = m[r][col];
      for (int c = 0; c < 3; ++c) m[r][c] = a * m[r][c] - b * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

AffineCheck affine_check() {
  // Products read left to right, the left factor acting first.
  std::array<Affine, 3> gen;
  for (int g = 0; g < 3; ++g) {
    Affine a;
    const int self = g, next = (g + 1) % 3, flip = (g + 2) % 3;
    a.A[self][self] = 1;
    a.A[next][next] = 1;
    a.A[flip][flip] = -1;
    a.t[self] = 1;
    gen[g] = a;
  }
  AffineCheck out;
  for (int g = 0; g < 3; ++g) {
    // v^-1 u v = u^-1 with (u, v) = (x, y), (y, z), (z, x).
    const Affine& u = gen[g];
    const Affine& v = gen[(g + 1) % 3];
    const Affine lhs = affine_compose(affine_compose(affine_inverse(v), u), v);
    out.relations[g] = lhs == affine_inverse(u);
    const Affine sq = affine_compose(u, u);
    bool identity_linear = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) identity_linear = identity_linear && sq.A[i][j] == (i == j);
    out.squares_are_translations[g] = identity_linear;
    out.translations[g] = sq.t;
  }
  out.lattice_rank = integer_rank(out.translations);
  out.ok = out.lattice_rank == 3;
  for (int g = 0; g < 3; ++g) out.ok = out.ok && out.relations[g] && out.squares_are_translations[g];
  return out;
}

}  // namespace bstri
