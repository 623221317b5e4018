#pragma once

// Abelian invariants via Smith normal form, and permutation groups with the
// derived-series and lower-central-series data used for quotient reports.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bstri/arith.hpp"
#include "bstri/coset.hpp"
#include "bstri/word.hpp"

namespace bstri {

// Invariant factors d1 | d2 | ... with 1s omitted; 0 is an infinite cyclic
// factor and always comes last.
struct AbelianInvariants {
  std::vector<BigInt> invariant_factors;

  bool finite() const;
  // Product of the factors; nullopt when some factor is 0.
  std::optional<BigInt> order() const;
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

using IntMatrix = std::vector<std::vector<BigInt>>;

// Diagonal of the Smith normal form, length min(rows, cols), nonnegative and
// forming a divisibility chain (zeros last).
std::vector<BigInt> smith_diagonal(IntMatrix m);

// Abelian group Z^cols / (row span).
AbelianInvariants invariants_from_matrix(const IntMatrix& rows, std::size_t cols);

// Exponent-sum matrix of the relators, reduced to Smith form.
AbelianInvariants abelianization(const Presentation& pres);

// `[2, 2, 0]`; the trivial group is `[]`.
std::string format_invariants(const AbelianInvariants& inv);

// Points are 0..n-1; p[i] is the image of i. Composition applies the left
// factor first: compose(a, b)[i] = b[a[i]].
using Perm = std::vector<std::uint32_t>;

Perm identity_perm(std::size_t n);
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& p);
bool is_identity(const Perm& p);
// a^-1 b^-1 a b
Perm commutator(const Perm& a, const Perm& b);
// g^-1 a g
Perm conjugate(const Perm& a, const Perm& g);
// p^e for any integer e.
Perm power(const Perm& p, const BigInt& e);
// Throws PreconditionViolated unless p is a permutation of 0..n-1.
void check_perm(const Perm& p, std::size_t n);

struct GroupLimits {
  std::size_t max_degree = 2'000'000;
  BigInt max_order = BigInt(1'000'000'000);
};

class StabChain;

class PermGroup {
 public:
  // Throws DegreeLimitExceeded when degree > limits.max_degree. With
  // `semiregular` the caller asserts that every nonidentity element moves
  // every point, e.g. a subgroup of a regular representation; the group is
  // then handled through the orbit of point 0.
  PermGroup(std::size_t degree, std::vector<Perm> generators, bool semiregular = false,
            const GroupLimits& limits = {});

  // Right regular representation from a complete trivial-subgroup table.
  // Throws IncompleteTable or NotRegular.
  static PermGroup regular(const CosetTable& t, const GroupLimits& limits = {});
  // Action on the cosets of a complete table (not necessarily faithful).
  static PermGroup coset_action(const CosetTable& t, const GroupLimits& limits = {});

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Perm>& generators() const noexcept { return generators_; }
  bool semiregular() const noexcept { return semiregular_; }

  BigInt order() const;
  bool is_trivial() const { return order() == 1; }
  // For a semiregular group, p must lie in the ambient regular group.
  bool contains(const Perm& p) const;

 private:
  PermGroup(std::size_t degree, std::vector<Perm> generators, bool semiregular,
            std::shared_ptr<const StabChain> chain);
  friend PermGroup normal_closure(const std::vector<Perm>& seeds, const PermGroup& ambient,
                                  const GroupLimits& limits);
  friend PermGroup commutator_subgroup(const PermGroup& a, const PermGroup& b,
                                       const GroupLimits& limits);

  std::size_t degree_ = 0;
  std::vector<Perm> generators_;
  bool semiregular_ = false;
  std::shared_ptr<const StabChain> chain_;
};

// Smallest subgroup containing the seeds and normalized by the ambient group.
PermGroup normal_closure(const std::vector<Perm>& seeds, const PermGroup& ambient,
                         const GroupLimits& limits = {});

// [A, B] for subgroups normalizing each other.
PermGroup commutator_subgroup(const PermGroup& a, const PermGroup& b,
                              const GroupLimits& limits = {});

PermGroup derived_subgroup(const PermGroup& g, const GroupLimits& limits = {});

// Every generator of a commutes with every generator of b.
bool centralizes(const PermGroup& a, const PermGroup& b);

struct SylowInfo {
  BigInt prime;
  BigInt order;
  bool abelian = false;
};

struct StructureReport {
  BigInt order;
  // |G|, |G'|, |G''|, ... ending at 1, or at a repeated order when G is not
  // solvable.
  std::vector<BigInt> derived_series_orders;
  // |G'|, |[G',G']|, |[G',G',G']|, ... as far as computed.
  std::vector<BigInt> derived_lower_central_orders;
  // nullopt: G' is not nilpotent.
  std::optional<unsigned> nilpotency_class_of_derived;
  bool solvable = false;
  bool is_derived_abelian = false;
  bool second_derived_central_in_derived = false;
  bool second_derived_central_in_whole = false;
  // Sylow subgroups of G', one per prime dividing |G'|, when G' is nilpotent.
  std::vector<SylowInfo> derived_sylows;
};

// Throws DegreeLimitExceeded when |G| exceeds limits.max_order.
StructureReport structure_report(const PermGroup& g, const GroupLimits& limits = {});

}  // namespace bstri
