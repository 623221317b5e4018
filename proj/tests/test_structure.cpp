#include <random>

#include "bstri/decide.hpp"
#include "bstri/error.hpp"
#include "bstri/structure.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bstri;

namespace {

std::vector<BigInt> drop_ones(const std::vector<long>& v) {
  std::vector<BigInt> out;
  for (long x : v)
    if (x != 1) out.push_back(x);
  return out;
}

Presentation triangle_G(long a, long b, long c, long d, long e, long f) {
  Presentation g;
  g.alphabet = Alphabet({"x", "y", "z"});
  g.relators = {conjugation_relator(kX, a, kY, b), conjugation_relator(kY, c, kZ, d),
                conjugation_relator(kZ, e, kX, f)};
  return g;
}

std::vector<oracle::P> as_oracle(const std::vector<Perm>& gens) {
  std::vector<oracle::P> out;
  for (const auto& g : gens) out.emplace_back(g.begin(), g.end());
  return out;
}

}  // namespace

TEST_CASE("Smith form agrees with determinantal divisors") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> entry(-6, 6), dim(1, 4);
  for (int t = 0; t < 300; ++t) {
    const int rows = dim(rng), cols = dim(rng);
    std::vector<std::vector<long>> a(rows, std::vector<long>(cols));
    IntMatrix m(rows, std::vector<BigInt>(cols));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m[i][j] = a[i][j] = entry(rng);
    const AbelianInvariants inv = invariants_from_matrix(m, cols);
    CHECK(inv.invariant_factors == drop_ones(oracle::invariant_factors(a)));
    const auto diag = smith_diagonal(m);
    CHECK(diag.size() == static_cast<std::size_t>(std::min(rows, cols)));
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) CHECK(divides(diag[i], diag[i + 1]));
  }
}

TEST_CASE("abelianization examples") {
  CHECK(abelianization(triangle_G(1, 2, 1, 2, 1, 2)).invariant_factors.empty());
  CHECK(abelianization(triangle_G(1, 3, 1, 3, 1, 3)).invariant_factors == std::vector<BigInt>{2, 2, 2});
  Presentation bs;
  bs.alphabet = Alphabet({"x", "y"});
  bs.relators = {conjugation_relator(0, 2, 1, 2)};
  const AbelianInvariants inv = abelianization(bs);
  CHECK(inv.invariant_factors == std::vector<BigInt>{0, 0});
  CHECK_FALSE(inv.finite());
  CHECK_FALSE(inv.order().has_value());
  CHECK(format_invariants(inv) == "[0, 0]");
  CHECK(format_invariants(AbelianInvariants{}) == "[]");
}

TEST_CASE("permutation basics") {
  const Perm a{1, 2, 0}, b{1, 0, 2};
  CHECK(compose(a, b) == Perm{0, 2, 1});  // a first, then b
  CHECK(is_identity(compose(a, inverse(a))));
  CHECK(commutator(a, b) == compose(compose(inverse(a), inverse(b)), compose(a, b)));
  CHECK(conjugate(a, b) == compose(compose(inverse(b), a), b));
  CHECK(power(a, 3) == identity_perm(3));
  CHECK(power(a, -1) == inverse(a));
  CHECK(power(a, BigInt(1) << 100) == power(a, 1));  // 2^100 = 1 mod 3
  CHECK_THROWS_AS(check_perm(Perm{0, 0, 1}, 3), Error);
}

TEST_CASE("derived subgroup examples") {
  const PermGroup c5(5, {Perm{1, 2, 3, 4, 0}});
  CHECK(c5.order() == 5);
  CHECK(derived_subgroup(c5).is_trivial());
  const PermGroup s3(3, {Perm{1, 2, 0}, Perm{1, 0, 2}});
  CHECK(s3.order() == 6);
  const PermGroup d = derived_subgroup(s3);
  CHECK(d.order() == 3);
  CHECK(d.contains(Perm{1, 2, 0}));
  CHECK_FALSE(d.contains(Perm{1, 0, 2}));
}

TEST_CASE("structure reports agree with brute force") {
  const std::vector<const char*> groups = {
      "gens: r s\nr^3\ns^2\nr s r s\n",
      "gens: r s\nr^4\ns^2\nr s r s\n",
      "gens: a b c\na^2\nb^2\nc^2\na b a b a b\nb c b c b c\na c a c\n",
      "gens: a b\na^2\nb^3\na b a b a b a b a b\n",
      "gens: i j\ni^4\ni^2 j^-2\nj^-1 i j i\n",
  };
  for (const char* text : groups) {
    const CosetTable t = enumerate(parse_presentation(text), {}, {});
    REQUIRE(t.complete());
    for (bool semi : {true, false}) {
      std::vector<Perm> gens;
      for (GenId g = 0; g < t.generator_count(); ++g) gens.push_back(permutation_image(t, g));
      const PermGroup g(t.coset_count(), gens, semi);
      const StructureReport r = structure_report(g);
      // Brute force derived series.
      const std::size_t n = t.coset_count();
      std::set<oracle::P> cur = oracle::closure(as_oracle(gens), n);
      std::vector<BigInt> series{BigInt(static_cast<unsigned long>(cur.size()))};
      while (cur.size() > 1) {
        auto next = oracle::derived(cur, n);
        const bool stuck = next.size() == cur.size();
        series.push_back(BigInt(static_cast<unsigned long>(next.size())));
        cur = std::move(next);
        if (stuck) break;
      }
      INFO(text);
      CHECK(r.order == series.front());
      CHECK(r.derived_series_orders == series);
      CHECK(r.solvable == (series.back() == 1));
    }
  }
}

TEST_CASE("structure report examples") {
  const PermGroup s3(3, {Perm{1, 2, 0}, Perm{1, 0, 2}});
  const StructureReport r = structure_report(s3);
  CHECK(r.order == 6);
  CHECK(r.derived_series_orders == std::vector<BigInt>{6, 3, 1});
  CHECK(r.is_derived_abelian);
  const StructureReport t = structure_report(PermGroup(1, {Perm{0}}));
  CHECK(t.order == 1);
  CHECK(t.derived_series_orders == std::vector<BigInt>{1});
}

TEST_CASE("regular and coset actions") {
  const CosetTable q = enumerate(build_Q(TriangleParams(1, 2, 1, 2, 1, 3)), {}, {});
  CHECK(PermGroup::regular(q).order() == 6);
  const Presentation s3 = parse_presentation("gens: r s\nr^3\ns^2\nr s r s\n");
  const CosetTable c = enumerate(s3, {{parse_word("s", s3.alphabet)}}, {});
  CHECK_THROWS_AS(PermGroup::regular(c), Error);
  CHECK(PermGroup::coset_action(c).order() == 6);
}

TEST_CASE("degree limit") {
  GroupLimits tight;
  tight.max_degree = 4;
  try {
    PermGroup(5, {Perm{1, 2, 3, 4, 0}}, false, tight);
    FAIL("expected DegreeLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeLimitExceeded);
  }
}

TEST_CASE("Q_3(1,4;1,4;1,4) has nonabelian derived subgroup of class 2") {
  const Presentation p = build_Qp(TriangleParams(1, 4, 1, 4, 1, 4), 3);
  const CyclicEnumeration e = enumerate_cyclic(p, Word::generator(kX), 81, {});
  REQUIRE(e.table.complete());
  const CosetTable t = induced_regular_table(e, 1u << 22);
  const StructureReport r = structure_report(PermGroup::regular(t));
  CHECK(r.order == 19683);
  CHECK_FALSE(r.is_derived_abelian);
  CHECK(r.nilpotency_class_of_derived == 2u);
  CHECK(r.second_derived_central_in_derived);
  REQUIRE(r.derived_sylows.size() == 1);
  CHECK(r.derived_sylows[0].prime == 3);
  CHECK_FALSE(r.derived_sylows[0].abelian);
}
