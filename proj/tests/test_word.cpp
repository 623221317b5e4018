#include <random>

#include "bstri/error.hpp"
#include "bstri/word.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bstri;

namespace {

const Alphabet xyz({"x", "y", "z"});

Word w(const char* s) { return parse_word(s, xyz); }

// Stack-based free reduction on single letters.
oracle::Letters letter_reduce(const oracle::Letters& in) {
  oracle::Letters out;
  for (int l : in) {
    if (!out.empty() && out.back() == (l ^ 1))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

}  // namespace

TEST_CASE("free_reduce examples") {
  CHECK(free_reduce(w("x y y^-1 x^-1")).empty());
  CHECK(free_reduce(w("x^2 x^3")) == w("x^5"));
  CHECK(free_reduce(w("y^-1 x y")) == w("y^-1 x y"));
}

TEST_CASE("cyclic_reduce examples") {
  CHECK(cyclic_reduce(w("x^-1 y x")) == w("y"));
  CHECK(cyclic_reduce(w("x^2 y")) == w("x^2 y"));
  CHECK(cyclic_reduce(Word()).empty());
}

TEST_CASE("free_reduce agrees with letter-level reduction") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> gen(0, 2), exp(-3, 3), len(0, 12);
  for (int t = 0; t < 500; ++t) {
    std::vector<Syllable> s;
    for (int i = len(rng); i > 0; --i) s.push_back({static_cast<GenId>(gen(rng)), exp(rng)});
    const Word raw(s);
    const Word red = free_reduce(raw);
    CHECK(*oracle::letters(red) == letter_reduce(*oracle::letters(raw)));
    CHECK(free_reduce(red) == red);
    CHECK(free_reduce(raw * raw.inverse()).empty());
  }
}

TEST_CASE("substitute") {
  const Word rel = conjugation_relator(1, 2, 2, 3);  // (y^2)^z y^-3
  GeneratorAssignment s{{1, w("y")}, {2, w("z^2")}};
  CHECK(substitute(rel, s) == w("z^-2 y^2 z^2 y^-3"));
  GeneratorAssignment id{{0, w("x")}, {1, w("y")}, {2, w("z")}};
  CHECK(substitute(w("x y^-2 z x"), id) == w("x y^-2 z x"));
  CHECK(substitute(w("x"), {{0, w("x^7")}}) == w("x^7"));
  try {
    substitute(w("x y"), {{0, w("x")}});
    FAIL("expected UnmappedGenerator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnmappedGenerator);
  }
}

TEST_CASE("conjugation_relator") {
  CHECK(conjugation_relator(0, 1, 1, 2) == w("y^-1 x y x^-2"));
  CHECK(conjugation_relator(2, 2, 0, 4) == w("x^-1 z^2 x z^-4"));
  CHECK(format_word(conjugation_relator(1, 5, 2, 7), xyz) == "z^-1 y^5 z y^-7");
}

TEST_CASE("commutator") { CHECK(commutator(w("x"), w("y")) == w("x^-1 y^-1 x y")); }

TEST_CASE("word syntax round trip") {
  for (const char* s : {"1", "x", "x^-1", "x^2 y^-1 z^4", "z^123456789012345678901"}) {
    CHECK(parse_word(format_word(w(s), xyz), xyz) == w(s));
  }
  CHECK(format_word(Word(), xyz) == "1");
  CHECK(w("x^2y^-1") == w("x^2 y^-1"));
  try {
    w("x q");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::UndeclaredGenerator));
  }
}

TEST_CASE("presentation files") {
  const Presentation p = parse_presentation("gens: a b\n# comment\na^3\nb^2\na b = b a^-1\n");
  CHECK(p.generator_count() == 2);
  REQUIRE(p.relators.size() == 3);
  const Presentation q = parse_presentation(format_presentation(p));
  CHECK(q.relators == p.relators);
}
