#pragma once

// Free-group words in syllable (run-length) form and finite presentations.
//
// A syllable is a generator index with a nonzero BigInt exponent, so words
// such as z^-(2^300) y z^5 stay small. Generator indices refer to an
// Alphabet, the ordered list of generator names a presentation declares.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bstri/arith.hpp"

namespace bstri {

using GenId = std::uint32_t;

struct Syllable {
  GenId gen = 0;
  BigInt exp;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Syllable> syllables);

  static Word generator(GenId g, const BigInt& exp = 1);

  const std::vector<Syllable>& syllables() const noexcept { return syllables_; }
  bool empty() const noexcept { return syllables_.empty(); }
  std::size_t syllable_count() const noexcept { return syllables_.size(); }

  // Sum of |exponents|: the number of letters when fully expanded.
  BigInt letter_length() const;

  Word inverse() const;

  // Concatenation, freely reduced.
  Word operator*(const Word& rhs) const;
  Word& operator*=(const Word& rhs);

  // n-th power for n >= 0, freely reduced (negative n uses the inverse).
  Word pow(std::int64_t n) const;

  // Raw concatenation without reduction.
  Word concat(const Word& rhs) const;

  // Exponent sum of each generator; `ngens` sets the vector length.
  std::vector<BigInt> exponent_sums(std::size_t ngens) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Syllable> syllables_;
};

// Merges equal neighbours and drops zero exponents. Idempotent.
Word free_reduce(const Word& w);

// Freely reduced word whose first and last syllables do not share a generator.
Word cyclic_reduce(const Word& w);

// (u^p)^v = u^q stored as the relator v^-1 u^p v u^-q.
Word conjugation_relator(GenId u, const BigInt& p, GenId v, const BigInt& q);

// [u, v] = u^-1 v^-1 u v.
Word commutator(const Word& u, const Word& v);

// Image of each source generator. Generators absent from the map are unmapped.
using GeneratorAssignment = std::map<GenId, Word>;

// Replaces every generator by its image and freely reduces. Throws
// UnmappedGenerator for generators missing from the assignment.
Word substitute(const Word& w, const GeneratorAssignment& images);

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(GenId g) const { return names_.at(g); }

  // Throws UndeclaredGenerator.
  GenId id(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

struct Presentation {
  Alphabet alphabet;
  std::vector<Word> relators;

  std::size_t generator_count() const noexcept { return alphabet.size(); }
};

// Word syntax: `x^2 y^-1 z^4`; spaces between syllables are optional, a bare
// generator means exponent 1, and `1` or an empty string is the identity.
Word parse_word(std::string_view text, const Alphabet& alphabet);
std::string format_word(const Word& w, const Alphabet& alphabet);

// Presentation files: a `gens: x y z` line, then one relator per line.
// A line `lhs = rhs` is read as the relator lhs * rhs^-1. Blank lines and
// text after `#` are ignored.
Presentation parse_presentation(std::string_view text);
std::string format_presentation(const Presentation& pres);

}  // namespace bstri
