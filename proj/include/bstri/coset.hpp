#pragma once

// Todd-Coxeter coset enumeration.
//
// Columns of a coset table are signed generators: column 2g is g and column
// 2g+1 is g^-1. Cosets are numbered from 0 in this API (coset 0 is the
// subgroup coset); the text dump numbers them from 1.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bstri/arith.hpp"
#include "bstri/word.hpp"

namespace bstri {

enum class Strategy { Hlt, Felsch };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

struct EnumLimits {
  std::size_t max_cosets = 40'000'000;
  double max_seconds = 600.0;
};

struct SubgroupSpec {
  std::vector<Word> generators;
};

enum class EnumStatus { Complete, Overflowed };

struct EnumStats {
  std::uint64_t cosets_defined = 0;
  std::uint64_t cosets_collapsed = 0;
  std::uint64_t deductions = 0;
  std::uint64_t lookaheads = 0;
  std::size_t max_active = 0;
  double seconds = 0.0;
};

struct CyclicEnumeration;

class CosetTable {
 public:
  CosetTable() = default;

  std::size_t coset_count() const noexcept { return count_; }
  std::size_t generator_count() const noexcept { return ngens_; }
  EnumStatus status() const noexcept { return status_; }
  bool complete() const noexcept { return status_ == EnumStatus::Complete; }
  // True when the subgroup was trivial, so cosets are group elements.
  bool regular() const noexcept { return regular_; }
  const EnumStats& stats() const noexcept { return stats_; }
  // Why an overflowed enumeration stopped.
  const std::string& overflow_reason() const noexcept { return overflow_reason_; }

  std::uint32_t act(std::uint32_t coset, std::size_t column) const {
    return static_cast<std::uint32_t>(table_[coset * columns() + column]);
  }
  std::uint32_t act(std::uint32_t coset, GenId g, bool inverse) const {
    return act(coset, 2 * g + (inverse ? 1 : 0));
  }
  std::size_t columns() const noexcept { return 2 * ngens_; }
  std::span<const std::int32_t> raw() const noexcept { return table_; }

 private:
  friend class CosetEnumerator;
  friend CosetTable power_subgroup_table(const CyclicEnumeration& e, std::uint64_t m,
                                         std::size_t max_degree);

  std::size_t ngens_ = 0;
  std::size_t count_ = 0;
  EnumStatus status_ = EnumStatus::Overflowed;
  bool regular_ = false;
  EnumStats stats_;
  std::string overflow_reason_;
  std::vector<std::int32_t> table_;
};

// Runs the enumeration. Exceeding limits yields an Overflowed table rather
// than an exception. Deterministic for fixed inputs and strategy.
CosetTable enumerate(const Presentation& pres, const SubgroupSpec& sub,
                     const EnumLimits& limits, Strategy strategy = Strategy::Hlt);

// Enumeration over a cyclic subgroup <h> that also determines the order of
// h. Each entry c.x = d carries k with r_c x = h^k r_d, where r_c is the
// representative of coset c; labels are residues mod generator_order.
struct CyclicEnumeration {
  CosetTable table;
  std::uint64_t generator_order = 0;
  std::vector<std::uint64_t> labels;  // same layout as table.raw()
};

// `order_multiple` must be a known positive multiple of the order of h
// (at most 2^62); labels are kept modulo it until relations shrink it.
CyclicEnumeration enumerate_cyclic(const Presentation& pres, const Word& h,
                                   std::uint64_t order_multiple, const EnumLimits& limits,
                                   Strategy strategy = Strategy::Hlt);

// Index times the order of h. Throws IncompleteTable.
BigInt group_order(const CyclicEnumeration& e);

// Coset table of the subgroup <h^m> for m dividing ord(h), built from a
// cyclic enumeration: coset <h^m> h^k r_c gets index c * m + k, so coset 0
// is still the subgroup coset. With m = ord(h) this is the regular table of
// the whole group. Throws DegreeLimitExceeded when index * m > max_degree.
CosetTable power_subgroup_table(const CyclicEnumeration& e, std::uint64_t m,
                                std::size_t max_degree);
CosetTable induced_regular_table(const CyclicEnumeration& e, std::size_t max_degree);

// Order of the permutation h induces on the cosets of <h>. <h^m> for this m
// is the core of <h>, the kernel of the coset action.
std::uint64_t core_exponent(const CyclicEnumeration& e, const Word& h);

// Replaces power relators g^N by g^gcd(N, D) when D is a known multiple of
// the order of g. Other relators pass through unchanged.
Presentation reduce_power_relators(const Presentation& pres,
                                   const std::map<GenId, BigInt>& order_multiples);

// Right action of g on cosets: out[c] = c * g. Throws IncompleteTable.
std::vector<std::uint32_t> permutation_image(const CosetTable& t, GenId g);

// Applies words to cosets. Exponents may be arbitrarily large: each
// generator's cycles are precomputed so g^e costs O(1) per syllable.
class WordEvaluator {
 public:
  explicit WordEvaluator(const CosetTable& t);

  std::uint32_t apply(std::uint32_t coset, const Word& w) const;
  std::uint32_t apply(std::uint32_t coset, GenId g, const BigInt& exp) const;
  // Whether w acts as the identity on every coset.
  bool acts_trivially(const Word& w) const;
  std::size_t degree() const noexcept { return degree_; }

 private:
  struct Cycles {
    std::vector<std::uint32_t> cycle_of;   // coset -> cycle id
    std::vector<std::uint32_t> position;   // coset -> index within its cycle
    std::vector<std::uint32_t> start;      // cycle id -> offset into members
    std::vector<std::uint32_t> length;     // cycle id -> length
    std::vector<std::uint32_t> members;
  };
  std::size_t degree_ = 0;
  std::vector<Cycles> cycles_;
};

// Order of w in the group, which acts regularly on the table's cosets.
// Throws IncompleteTable, or NotRegular when the subgroup was nontrivial.
BigInt element_order(const CosetTable& t, const Word& w);

// Regular table: w fixes coset 0. Otherwise: w acts trivially on all cosets,
// i.e. it is trivial in the permutation image. Throws IncompleteTable.
bool is_trivial_in_quotient(const CosetTable& t, const Word& w);

// `cosets: N status: complete`, then per coset the images under
// g1, g1^-1, g2, g2^-1, ... (1-based).
std::string dump_table(const CosetTable& t);

}  // namespace bstri
