#pragma once

// Developability verdicts, finiteness, and analysis of the universal
// finite-order quotient Q and its p-quotients Q_p.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bstri/arith.hpp"
#include "bstri/coset.hpp"
#include "bstri/structure.hpp"
#include "bstri/triangle.hpp"
#include "bstri/word.hpp"

namespace bstri {

// ---- verdicts ----------------------------------------------------------------

enum class Outcome { Developable, NotDevelopable, Unknown };
std::string_view to_string(Outcome o);

struct EvidenceStep {
  std::string rule;    // e.g. "divisibility", "SC3", "coprime-reduction"
  std::string detail;  // human-readable
  std::optional<TriangleParams> params_after;
};

// Developable special families, as literal patterns:
//   SC1 (a,-a;c,-c;e,-e)
//   SC2 (a,b;c,c;e,e)
//   SC3 (a,b;c,c;e,-e)   with a = b mod 2
//   SC4 (a,b;c,-c;e,e)   with e even
//   SC5 (a,b;c,-c;e,-e)  with e even and a = b mod 2
enum class Family { SC1, SC2, SC3, SC4, SC5 };
std::string_view to_string(Family f);
bool matches_family(const TriangleParams& p, Family f);

// Developable coprime cases:
//   CP1 (1,-1;1,-1;1,-1)
//   CP2 (a,b;1,1;1,1)
//   CP3 (a,b;1,1;1,-1)   with a, b odd
enum class CoprimeCase { CP1, CP2, CP3 };
std::string_view to_string(CoprimeCase c);
bool matches_coprime_case(const TriangleParams& p, CoprimeCase c);

template <typename Tag>
struct OrbitMatch {
  Tag tag;
  MoveSequence moves;  // carries the input to the matching tuple
  TriangleParams matched;
};

// First family (in SC1..SC5 order) met by the orbit of p.
std::optional<OrbitMatch<Family>> find_family(const TriangleParams& p);
std::optional<OrbitMatch<CoprimeCase>> find_coprime_case(const TriangleParams& p);

// Some parameter divides its partner somewhere in the orbit.
bool has_divisibility(const TriangleParams& p);

// Externally reported facts, used as annotations only.
struct KnownFact {
  TriangleParams params;
  std::string tag;
  std::string citation;
};
const std::vector<KnownFact>& known_facts();
std::vector<std::string> annotations_for(const TriangleParams& p);

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<std::string> family;  // SC1..SC5 or CP1..CP3 when Developable
  std::vector<EvidenceStep> evidence;
  std::vector<std::string> annotations;
};

// Divisibility over the orbit decides; the coprime reduction followed by
// coprime_classify is run as a second route and recorded in the evidence.
Verdict decide(const TriangleParams& p, const SizeGuard& guard = SizeGuard::from_env());

// Requires coprime pairs and some parameter equal to +-1.
Verdict coprime_classify(const TriangleParams& p);

inline constexpr unsigned kMaxSearchDepth = 4;

// Explores power reductions up to `depth` steps (at most kMaxSearchDepth).
Verdict decide_with_reduction_search(const TriangleParams& p, unsigned depth,
                                     const SizeGuard& guard = SizeGuard::from_env());

// ---- finiteness --------------------------------------------------------------

enum class Finiteness { Finite, Infinite, Unknown };
std::string_view to_string(Finiteness f);

struct FinitenessVerdict {
  Finiteness outcome = Finiteness::Unknown;
  std::vector<EvidenceStep> evidence;
  std::vector<std::string> annotations;
};

FinitenessVerdict finiteness_verdict(const TriangleParams& p);

// ---- Q and Q_p ---------------------------------------------------------------

// Coprime pairs, none equal to (+-1,+-1). Throws PreconditionViolated naming
// the failed condition.
void check_quotient_hypotheses(const TriangleParams& p);

struct NormalizedParams {
  TriangleParams params;  // a < b, c < d, e < f
  MoveSequence moves;
};
NormalizedParams normalize_for_quotient(const TriangleParams& p);

// Conjugation relators plus x^N_x, y^N_y, z^N_z for the normalized tuple.
Presentation build_Q(const TriangleParams& p, const SizeGuard& guard = SizeGuard::from_env());
// As build_Q with each N replaced by its p-part. Throws NotPrime.
Presentation build_Qp(const TriangleParams& p, const BigInt& prime,
                      const SizeGuard& guard = SizeGuard::from_env());

struct AnalysisOptions {
  EnumLimits limits;
  Strategy strategy = Strategy::Hlt;
  GroupLimits group;
  // Largest regular table materialized for element orders and relation checks.
  std::size_t max_eval_degree = 16'000'000;
  bool per_prime = true;
  SizeGuard guard = SizeGuard::from_env();
};

// Enumeration of a quotient with generators x, y, z. When a multiple of the
// order of x fits 62 bits the enumeration runs over <x> and the regular
// table is induced from it; otherwise over the trivial subgroup.
struct QuotientEnumeration {
  bool complete = false;
  std::string overflow_reason;
  std::string method;  // "cyclic-subgroup x" or "regular"
  BigInt order;
  EnumStats stats;
  std::optional<CyclicEnumeration> cyclic;
  std::optional<CosetTable> regular;  // when order <= max_eval_degree
};

QuotientEnumeration enumerate_quotient(const Presentation& pres, const BigInt& x_order_multiple,
                                       const AnalysisOptions& options);

struct StructureInfo {
  StructureReport report;
  std::string source;  // "regular" or "quotient by core of <h>"
  bool faithful = true;
  BigInt kernel_order = 1;
};

struct BoundCheck {
  std::optional<BigInt> L, M, ratio;
  bool L_divides_order = false;
  bool ratio_divides_M = false;
};

struct RelationCheck {
  std::string name;
  std::optional<bool> holds;  // nullopt: not evaluated (see note)
  std::string note;
};

struct PrimeReport {
  BigInt prime;
  bool complete = false;
  BigInt order;
  std::optional<bool> derived_abelian;
  // Whether the Sylow p-subgroup of Q' is abelian, from the structure of Q
  // itself; this is Q_p' for the quotient retaining only that Sylow subgroup.
  std::optional<bool> sylow_of_derived_abelian;
  bool criterion_expected = false;  // p does not divide all three differences
  std::optional<bool> order_divides_Q;
  // p-part of |Q'| times |Q/Q'|, the order of the structural Q_p.
  std::optional<BigInt> structural_order;
  std::optional<bool> matches_structural;
  std::string note;
};

struct QuotientReport {
  TriangleParams input;
  TriangleParams params;  // normalized
  MoveSequence moves;
  std::optional<BigInt> prime;  // set for a Q_p analysis
  std::array<BigInt, 3> order_relators;  // exponents of x, y, z in the presentation
  bool complete = false;
  std::string overflow_reason;
  std::string method;
  BigInt order;
  EnumStats stats;
  std::optional<std::array<BigInt, 3>> element_orders;
  AbelianInvariants abelian_invariants;
  std::optional<StructureInfo> structure;
  std::string structure_note;
  std::optional<BoundCheck> bounds;  // Q only
  std::vector<PrimeReport> per_prime;
  std::vector<RelationCheck> relation_checks;
  double seconds = 0.0;
};

// Throws PreconditionViolated when the hypotheses fail.
QuotientReport analyze_Q(const TriangleParams& p, const AnalysisOptions& options = {});
QuotientReport analyze_Qp(const TriangleParams& p, const BigInt& prime,
                          const AnalysisOptions& options = {});

struct CriterionResult {
  bool expected_abelian = false;
  std::optional<bool> computed_abelian;  // nullopt when the analysis did not finish
  bool holds() const { return !expected_abelian || computed_abelian.value_or(true); }
};

CriterionResult check_p_criterion(const TriangleParams& p, const BigInt& prime,
                                  const AnalysisOptions& options = {});

// ---- Euclidean case ----------------------------------------------------------

// Affine maps v -> A v + t of Z^3.
struct Affine {
  std::array<std::array<std::int64_t, 3>, 3> A{};
  std::array<std::int64_t, 3> t{};
  friend bool operator==(const Affine&, const Affine&) = default;
};

Affine affine_compose(const Affine& first, const Affine& then);
Affine affine_inverse(const Affine& g);  // linear parts must be signed permutations

struct AffineCheck {
  std::array<bool, 3> relations{};  // y^-1 x y = x^-1 and cyclic versions
  std::array<std::array<std::int64_t, 3>, 3> translations{};  // x^2, y^2, z^2
  std::array<bool, 3> squares_are_translations{};
  int lattice_rank = 0;
  bool ok = false;
};

// x: (X,Y,Z) -> (X+1, Y, -Z), y and z by cycling the coordinates.
AffineCheck affine_check();

}  // namespace bstri
