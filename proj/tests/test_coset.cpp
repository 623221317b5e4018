#include "bstri/coset.hpp"
#include "bstri/decide.hpp"
#include "bstri/error.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bstri;

namespace {

Presentation pres(const char* text) { return parse_presentation(text); }

Presentation triangle_G(const TriangleParams& p) {
  Presentation g;
  g.alphabet = Alphabet({"x", "y", "z"});
  g.relators = {conjugation_relator(kX, p.a(), kY, p.b()), conjugation_relator(kY, p.c(), kZ, p.d()),
                conjugation_relator(kZ, p.e(), kX, p.f())};
  return g;
}

std::vector<Presentation> small_groups() {
  std::vector<Presentation> out;
  for (int n = 1; n <= 9; ++n)
    out.push_back(pres(("gens: r s\nr^" + std::to_string(n) + "\ns^2\nr s r s\n").c_str()));
  return out;
}

const std::vector<std::pair<const char*, std::size_t>> kKnown = {
    {"gens: x\nx^5\n", 5},
    {"gens: a b\na^2\nb^3\na b a b a b a b a b\n", 60},
    {"gens: a b\na^2\nb^3\na b a b a b a b a b a b a b\na^-1 b^-1 a b a^-1 b^-1 a b a^-1 b^-1 a b a^-1 b^-1 a b\n", 168},
    {"gens: a b c\na^2\nb^2\nc^2\na b a b a b\nb c b c b c\na c a c\n", 24},
    {"gens: x y\nx^4\ny^4\nx^-1 y^-1 x y\n", 16},
};

}  // namespace

TEST_CASE("enumeration examples") {
  const auto limits = EnumLimits{};
  CHECK(enumerate(build_Q(TriangleParams(1, 2, 1, 2, 1, 2)), {}, limits).coset_count() == 1);
  CHECK(enumerate(pres("gens: x\nx^5\n"), {}, limits).coset_count() == 5);
}

TEST_CASE("G(2,3;3,4;1,2) is trivial through its order relators") {
  // The bare presentation does not collapse within desk-scale budgets, so
  // add the power relators that hold in G and check the budget stops cleanly.
  const TriangleParams p(2, 3, 3, 4, 1, 2);
  const auto n = order_exponents(p);
  for (const auto& e : n) CHECK(e == BigInt(1));
  CHECK(enumerate(build_Q(p), {}, {}).coset_count() == 1);
  EnumLimits small;
  small.max_cosets = 20000;
  const CosetTable bare = enumerate(triangle_G(p), {}, small);
  CHECK_FALSE(bare.complete());
  CHECK_FALSE(bare.overflow_reason().empty());
}

TEST_CASE("orders agree with the naive enumerator") {
  for (Strategy s : {Strategy::Hlt, Strategy::Felsch}) {
    for (const auto& [text, order] : kKnown) {
      const Presentation p = pres(text);
      const CosetTable t = enumerate(p, {}, {}, s);
      REQUIRE(t.complete());
      CHECK(t.coset_count() == order);
      CHECK(oracle::naive_order(p) == order);
    }
    for (const auto& p : small_groups()) {
      const CosetTable t = enumerate(p, {}, {}, s);
      CHECK(oracle::naive_order(p) == t.coset_count());
    }
  }
}

TEST_CASE("subgroup index") {
  const Presentation s3 = pres("gens: r s\nr^3\ns^2\nr s r s\n");
  SubgroupSpec sub{{parse_word("s", s3.alphabet)}};
  const CosetTable t = enumerate(s3, sub, {});
  CHECK(t.coset_count() == 3);
  CHECK_FALSE(t.regular());
  CHECK(oracle::NaiveTC(2, {{0, 0, 0}, {2, 2}, {0, 2, 0, 2}}, {{2}}).run(1000) == 3u);
  CHECK(is_trivial_in_quotient(t, parse_word("r^3", s3.alphabet)));
  CHECK_FALSE(is_trivial_in_quotient(t, parse_word("r", s3.alphabet)));
}

TEST_CASE("overflow is reported in-band") {
  const Presentation p = pres("gens: a b\na^2\nb^3\na b a b a b a b a b\n");
  const CosetTable t = enumerate(p, {}, {10, 600.0});
  CHECK(t.status() == EnumStatus::Overflowed);
  CHECK_FALSE(t.overflow_reason().empty());
  CHECK_THROWS_AS(permutation_image(t, 0), Error);
}

TEST_CASE("enumeration is deterministic") {
  const Presentation p = build_Q(TriangleParams(1, 3, 1, 3, 1, 4));
  for (Strategy s : {Strategy::Hlt, Strategy::Felsch}) {
    const CosetTable a = enumerate(p, {}, {}, s);
    const CosetTable b = enumerate(p, {}, {}, s);
    CHECK(std::equal(a.raw().begin(), a.raw().end(), b.raw().begin(), b.raw().end()));
  }
}

TEST_CASE("permutation images, element orders and triviality") {
  const CosetTable c5 = enumerate(pres("gens: x\nx^5\n"), {}, {});
  const auto img = permutation_image(c5, 0);
  std::uint32_t k = 0;
  for (int i = 0; i < 5; ++i) k = img[k];
  CHECK(k == 0);
  CHECK(img[0] != 0);
  const Alphabet xa({"x"});
  CHECK(is_trivial_in_quotient(c5, parse_word("x^5", xa)));
  CHECK_FALSE(is_trivial_in_quotient(c5, parse_word("x^2", xa)));
  CHECK(element_order(c5, Word()) == 1);

  const CosetTable one = enumerate(build_Q(TriangleParams(1, 2, 1, 2, 1, 2)), {}, {});
  CHECK(permutation_image(one, 2) == std::vector<std::uint32_t>{0});
  CHECK(is_trivial_in_quotient(one, Word::generator(1, 12345)));

  const CosetTable q = enumerate(build_Q(TriangleParams(1, 2, 1, 2, 1, 3)), {}, {});
  REQUIRE(q.coset_count() == 6);
  CHECK(element_order(q, Word::generator(kY)) == 3);
  CHECK(element_order(q, Word::generator(kX)) == 1);
  CHECK(element_order(q, Word::generator(kZ)) == 2);
  const auto z = permutation_image(q, kZ);
  for (std::uint32_t i = 0; i < 6; ++i) CHECK(z[z[i]] == i);
}

TEST_CASE("word evaluator handles huge exponents") {
  const CosetTable q = enumerate(build_Q(TriangleParams(1, 2, 1, 2, 1, 3)), {}, {});
  const WordEvaluator ev(q);
  const BigInt huge = BigInt(1) << 300;
  // 2^300 = 1 mod 3 and 0 mod 2.
  CHECK(ev.apply(0, kY, huge) == ev.apply(0, kY, 1));
  CHECK(ev.apply(0, kZ, huge) == 0);
  CHECK(ev.apply(0, kY, -huge) == ev.apply(0, kY, -1));
}

TEST_CASE("cyclic-subgroup enumeration matches regular enumeration") {
  for (const char* s : {"1,2;1,2;1,3", "1,3;1,3;1,3", "1,2;1,3;1,4", "1,3;1,4;1,2", "1,4;1,2;1,2",
                        "1,3;1,2;1,4", "2,3;1,2;1,3"}) {
    const TriangleParams p = parse_params(s);
    const Presentation pr = build_Q(p);
    const auto n = order_exponents(normalize_for_quotient(p).params);
    for (Strategy st : {Strategy::Hlt, Strategy::Felsch}) {
      const CyclicEnumeration e = enumerate_cyclic(pr, Word::generator(kX), to_u64(*n[0]), {}, st);
      REQUIRE(e.table.complete());
      const CosetTable reg = enumerate(pr, {}, {}, st);
      REQUIRE(reg.complete());
      INFO(s);
      CHECK(group_order(e) == reg.coset_count());
      CHECK(BigInt(static_cast<unsigned long>(e.generator_order)) ==
            element_order(reg, Word::generator(kX)));
      const CosetTable ind = induced_regular_table(e, 1u << 24);
      CHECK(ind.regular());
      CHECK(ind.coset_count() == reg.coset_count());
      const WordEvaluator ev(ind);
      for (const auto& r : pr.relators) CHECK(ev.acts_trivially(r));
      // The induced and enumerated tables describe the same group, so orders agree.
      for (const char* wtxt : {"x y", "y z^-1", "x y z", "x^2 z y^-1"}) {
        const Word w = parse_word(wtxt, pr.alphabet);
        CHECK(element_order(ind, w) == element_order(reg, w));
      }
    }
  }
}

TEST_CASE("power subgroup tables") {
  const Presentation pr = build_Q(TriangleParams(1, 3, 1, 4, 1, 4));
  const auto n = order_exponents(TriangleParams(1, 3, 1, 4, 1, 4));
  const CyclicEnumeration e = enumerate_cyclic(pr, Word::generator(kX), to_u64(*n[0]), {});
  REQUIRE(e.table.complete());
  const std::uint64_t ord = e.generator_order;
  const std::uint64_t m = core_exponent(e, Word::generator(kX));
  CHECK(ord % m == 0);
  for (std::uint64_t d = 1; d <= ord; ++d) {
    if (ord % d) continue;
    const CosetTable t = power_subgroup_table(e, d, 1u << 24);
    CHECK(t.coset_count() == e.table.coset_count() * d);
    CHECK(t.regular() == (d == ord));
    // Relators of the group act trivially on cosets of the normal core only.
    if (d == m) {
      const WordEvaluator ev(t);
      for (const auto& r : pr.relators) CHECK(ev.acts_trivially(r));
    }
  }
  CHECK_THROWS_AS(power_subgroup_table(e, ord + 1, 1u << 24), Error);
  CHECK_THROWS_AS(power_subgroup_table(e, ord, 3), Error);
}

TEST_CASE("reduce_power_relators") {
  const Presentation p = pres("gens: x y\nx^12\ny^5\nx y x^-1 y^-1\n");
  const Presentation q = reduce_power_relators(p, {{0, BigInt(8)}});
  CHECK(q.relators[0] == Word::generator(0, 4));
  CHECK(q.relators[1] == p.relators[1]);
  CHECK(q.relators[2] == p.relators[2]);
}

TEST_CASE("table dump") {
  const CosetTable c = enumerate(pres("gens: x\nx^2\n"), {}, {});
  CHECK(dump_table(c).rfind("cosets: 2 status: complete", 0) == 0);
}
