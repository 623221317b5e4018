#include "bstri/structure.hpp"

#include <algorithm>
#include <numeric>

#include "bstri/error.hpp"
#include "bstri/simd/perm_kernels.hpp"

namespace bstri {

// ---- abelian invariants ------------------------------------------------------

bool AbelianInvariants::finite() const {
  return std::none_of(invariant_factors.begin(), invariant_factors.end(),
                      [](const BigInt& d) { return d == 0; });
}

std::optional<BigInt> AbelianInvariants::order() const {
  if (!finite()) return std::nullopt;
  BigInt n = 1;
  for (const auto& d : invariant_factors) n *= d;
  return n;
}

std::vector<BigInt> smith_diagonal(IntMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m.front().size();
  for (const auto& r : m) {
    if (r.size() != cols) throw Error(ErrorKind::PreconditionViolated, "smith_diagonal: ragged matrix");
  }
  const std::size_t diag = std::min(rows, cols);
  std::vector<BigInt> out;
  out.reserve(diag);
  for (std::size_t t = 0; t < diag; ++t) {
    for (;;) {
      // Pivot: least nonzero absolute value in the remaining block.
      std::size_t pr = rows;
      std::size_t pc = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] == 0) continue;
          if (pr == rows || abs(m[i][j]) < abs(m[pr][pc])) {
            pr = i;
            pc = j;
          }
        }
      }
      if (pr == rows) break;
      std::swap(m[t], m[pr]);
      for (auto& r : m) std::swap(r[t], r[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        const BigInt q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        const BigInt q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold a row with an entry the pivot does not divide.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
            divisible = false;
            break;
          }
        }
      }
      if (divisible) break;
    }
    out.push_back(abs(m[t][t]));
  }
  return out;
}

AbelianInvariants invariants_from_matrix(const IntMatrix& rows, std::size_t cols) {
  IntMatrix m;
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorKind::PreconditionViolated, "invariants_from_matrix: row length");
    if (std::any_of(r.begin(), r.end(), [](const BigInt& v) { return v != 0; })) m.push_back(r);
  }
  AbelianInvariants inv;
  std::size_t rank = 0;
  if (!m.empty()) {
    for (const auto& d : smith_diagonal(std::move(m))) {
      if (d == 0) continue;
      ++rank;
      if (d != 1) inv.invariant_factors.push_back(d);
    }
  }
  for (std::size_t k = rank; k < cols; ++k) inv.invariant_factors.emplace_back(0);
  return inv;
}

AbelianInvariants abelianization(const Presentation& pres) {
  IntMatrix rows;
  for (const auto& r : pres.relators) rows.push_back(r.exponent_sums(pres.generator_count()));
  return invariants_from_matrix(rows, pres.generator_count());
}

std::string format_invariants(const AbelianInvariants& inv) {
  std::string out = "[";
  for (std::size_t i = 0; i < inv.invariant_factors.size(); ++i) {
    if (i > 0) out += ", ";
    out += inv.invariant_factors[i].get_str();
  }
  return out + "]";
}

// ---- permutations ------------------------------------------------------------

Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm out(a.size());
  simd::perm_kernels().compose(a.data(), b.data(), out.data(), a.size());
  return out;
}

Perm inverse(const Perm& p) {
  Perm out(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) out[p[i]] = i;
  return out;
}

bool is_identity(const Perm& p) { return simd::perm_kernels().is_identity(p.data(), p.size()); }

Perm commutator(const Perm& a, const Perm& b) {
  return compose(compose(inverse(a), inverse(b)), compose(a, b));
}

Perm conjugate(const Perm& a, const Perm& g) { return compose(compose(inverse(g), a), g); }

Perm power(const Perm& p, const BigInt& e) {
  Perm out(p.size());
  std::vector<char> seen(p.size(), 0);
  std::vector<std::uint32_t> cyc;
  for (std::uint32_t s = 0; s < p.size(); ++s) {
    if (seen[s]) continue;
    cyc.clear();
    for (std::uint32_t c = s; !seen[c]; c = p[c]) {
      seen[c] = 1;
      cyc.push_back(c);
    }
    const std::size_t len = cyc.size();
    const std::size_t shift = mpz_fdiv_ui(e.get_mpz_t(), len);
    for (std::size_t i = 0; i < len; ++i) out[cyc[i]] = cyc[(i + shift) % len];
  }
  return out;
}

void check_perm(const Perm& p, std::size_t n) {
  if (p.size() != n) throw Error(ErrorKind::PreconditionViolated, "permutation has the wrong degree");
  std::vector<bool> seen(n, false);
  for (auto v : p) {
    if (v >= n || seen[v]) throw Error(ErrorKind::PreconditionViolated, "not a permutation");
    seen[v] = true;
  }
}

// ---- stabilizer chains -------------------------------------------------------

// Semiregular groups keep only the orbit of 0, which is in bijection with
// the group. Otherwise a base and strong generating set built by the
// deterministic Schreier-Sims algorithm with Schreier vectors.
class StabChain {
 public:
  StabChain(std::size_t degree, bool semiregular) : n_(degree), semiregular_(semiregular) {
    if (semiregular_) {
      in_orbit_.assign(n_, false);
      in_orbit_[0] = true;
      orbit_.push_back(0);
    }
  }

  bool contains(const Perm& p) const {
    if (semiregular_) return in_orbit_[p[0]];
    Perm h = p;
    Perm tmp(n_);
    return strip(h, tmp, 0) == levels_.size() && is_identity(h);
  }

  bool contains_point(std::uint32_t image_of_zero) const { return in_orbit_[image_of_zero]; }

  bool add(const Perm& p) {
    if (semiregular_) {
      if (in_orbit_[p[0]]) return false;
      gens_.push_back(p);
      extend_orbit(gens_.size() - 1);
      return true;
    }
    Perm h = p;
    Perm tmp(n_);
    const std::size_t j = strip(h, tmp, 0);
    if (j == levels_.size() && is_identity(h)) return false;
    insert(h, 0, j);
    complete(j);
    return true;
  }

  BigInt order() const {
    if (semiregular_) return BigInt(static_cast<unsigned long>(orbit_.size()));
    BigInt n = 1;
    for (const auto& l : levels_) n *= static_cast<unsigned long>(l.orbit.size());
    return n;
  }

 private:
  struct Level {
    std::uint32_t base = 0;
    std::vector<Perm> gens;
    std::vector<Perm> inv;
    std::vector<std::int32_t> sv;  // generator index reaching the point, -1 absent, -2 base
    std::vector<std::uint32_t> orbit;
    std::vector<std::uint32_t> tested;  // per orbit point: generators already checked
  };

  static constexpr std::int32_t kAbsent = -1;
  static constexpr std::int32_t kBase = -2;

  void extend_orbit(std::size_t gen) {
    const Perm& g = gens_[gen];
    const std::size_t old = orbit_.size();
    for (std::size_t i = 0; i < old; ++i) visit(g[orbit_[i]]);
    for (std::size_t i = old; i < orbit_.size(); ++i) {
      for (const auto& s : gens_) visit(s[orbit_[i]]);
    }
  }

  void visit(std::uint32_t q) {
    if (!in_orbit_[q]) {
      in_orbit_[q] = true;
      orbit_.push_back(q);
    }
  }

  // Sifts h through levels from..; returns the level where it left the
  // orbit, or levels_.size() if it passed all of them.
  std::size_t strip(Perm& h, Perm& tmp, std::size_t from) const {
    const auto& k = simd::perm_kernels();
    for (std::size_t i = from; i < levels_.size(); ++i) {
      const Level& l = levels_[i];
      std::uint32_t beta = h[l.base];
      if (l.sv[beta] == kAbsent) return i;
      while (l.sv[beta] != kBase) {
        const Perm& s_inv = l.inv[static_cast<std::size_t>(l.sv[beta])];
        k.compose(h.data(), s_inv.data(), tmp.data(), n_);
        std::swap(h, tmp);
        beta = s_inv[beta];
      }
    }
    return levels_.size();
  }

  // Transversal element carrying the base of level l to beta.
  Perm transversal(const Level& l, std::uint32_t beta) const {
    std::vector<std::size_t> path;
    while (l.sv[beta] != kBase) {
      const auto s = static_cast<std::size_t>(l.sv[beta]);
      path.push_back(s);
      beta = l.inv[s][beta];
    }
    Perm u = identity_perm(n_);
    Perm tmp(n_);
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      simd::perm_kernels().compose(u.data(), l.gens[*it].data(), tmp.data(), n_);
      std::swap(u, tmp);
    }
    return u;
  }

  void add_level_gen(std::size_t li, const Perm& h) {
    Level& l = levels_[li];
    l.gens.push_back(h);
    l.inv.push_back(inverse(h));
    const std::size_t gi = l.gens.size() - 1;
    const std::size_t old = l.orbit.size();
    auto visit_level = [&l](std::uint32_t q, std::size_t via) {
      if (l.sv[q] == kAbsent) {
        l.sv[q] = static_cast<std::int32_t>(via);
        l.orbit.push_back(q);
        l.tested.push_back(0);
      }
    };
    for (std::size_t i = 0; i < old; ++i) visit_level(l.gens[gi][l.orbit[i]], gi);
    for (std::size_t i = old; i < l.orbit.size(); ++i) {
      for (std::size_t s = 0; s < l.gens.size(); ++s) visit_level(l.gens[s][l.orbit[i]], s);
    }
  }

  // Adds h, which fixes the bases of levels < to, as a strong generator of
  // levels from..to, opening a new level when to == levels_.size().
  void insert(const Perm& h, std::size_t from, std::size_t to) {
    if (to == levels_.size()) {
      Level l;
      std::uint32_t moved = 0;
      while (h[moved] == moved) ++moved;
      l.base = moved;
      l.sv.assign(n_, kAbsent);
      l.sv[moved] = kBase;
      l.orbit.push_back(moved);
      l.tested.push_back(0);
      levels_.push_back(std::move(l));
    }
    for (std::size_t li = from; li <= to; ++li) add_level_gen(li, h);
  }

  // Schreier-Sims main loop from level `start` upwards.
  void complete(std::size_t start) {
    auto i = static_cast<std::ptrdiff_t>(std::min(start, levels_.size() - 1));
    Perm tmp(n_);
    while (i >= 0) {
      const auto li = static_cast<std::size_t>(i);
      bool grew = false;
      for (std::size_t idx = 0; idx < levels_[li].orbit.size() && !grew; ++idx) {
        while (levels_[li].tested[idx] < levels_[li].gens.size()) {
          const Level& l = levels_[li];
          const std::size_t s = l.tested[idx];
          const std::uint32_t beta = l.orbit[idx];
          // h = u_beta s u_gamma^-1 fixes the base of this level.
          Perm h = compose(transversal(l, beta), l.gens[s]);
          std::uint32_t gamma = l.gens[s][beta];
          while (l.sv[gamma] != kBase) {
            const Perm& s_inv = l.inv[static_cast<std::size_t>(l.sv[gamma])];
            simd::perm_kernels().compose(h.data(), s_inv.data(), tmp.data(), n_);
            std::swap(h, tmp);
            gamma = s_inv[gamma];
          }
          ++levels_[li].tested[idx];
          const std::size_t j = strip(h, tmp, li + 1);
          if (j == levels_.size() && is_identity(h)) continue;
          insert(h, li + 1, j);
          i = static_cast<std::ptrdiff_t>(j);
          grew = true;
          break;
        }
      }
      if (!grew) --i;
    }
  }

  std::size_t n_;
  bool semiregular_;
  // Semiregular mode.
  std::vector<Perm> gens_;
  std::vector<bool> in_orbit_;
  std::vector<std::uint32_t> orbit_;
  // General mode.
  std::vector<Level> levels_;
};

// ---- permutation groups ------------------------------------------------------

namespace {

void check_degree(std::size_t degree, const GroupLimits& limits) {
  if (degree > limits.max_degree) {
    throw Error(ErrorKind::DegreeLimitExceeded, "degree " + std::to_string(degree) +
                                                    " exceeds the limit " +
                                                    std::to_string(limits.max_degree));
  }
}

}  // namespace

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> generators, bool semiregular,
                     const GroupLimits& limits)
    : degree_(degree), semiregular_(semiregular) {
  if (degree == 0) throw Error(ErrorKind::PreconditionViolated, "PermGroup: degree must be positive");
  check_degree(degree, limits);
  auto chain = std::make_shared<StabChain>(degree, semiregular);
  for (auto& g : generators) {
    check_perm(g, degree);
    if (is_identity(g)) continue;
    chain->add(g);
    generators_.push_back(std::move(g));
  }
  chain_ = std::move(chain);
}

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> generators, bool semiregular,
                     std::shared_ptr<const StabChain> chain)
    : degree_(degree),
      generators_(std::move(generators)),
      semiregular_(semiregular),
      chain_(std::move(chain)) {}

PermGroup PermGroup::regular(const CosetTable& t, const GroupLimits& limits) {
  if (!t.complete()) throw Error(ErrorKind::IncompleteTable, "coset table is not complete");
  if (!t.regular()) throw Error(ErrorKind::NotRegular, "table is not over the trivial subgroup");
  check_degree(t.coset_count(), limits);
  std::vector<Perm> gens;
  for (GenId g = 0; g < t.generator_count(); ++g) gens.push_back(permutation_image(t, g));
  return PermGroup(t.coset_count(), std::move(gens), true, limits);
}

PermGroup PermGroup::coset_action(const CosetTable& t, const GroupLimits& limits) {
  if (!t.complete()) throw Error(ErrorKind::IncompleteTable, "coset table is not complete");
  check_degree(t.coset_count(), limits);
  std::vector<Perm> gens;
  for (GenId g = 0; g < t.generator_count(); ++g) gens.push_back(permutation_image(t, g));
  return PermGroup(t.coset_count(), std::move(gens), t.regular(), limits);
}

BigInt PermGroup::order() const { return chain_->order(); }

bool PermGroup::contains(const Perm& p) const {
  check_perm(p, degree_);
  return chain_->contains(p);
}

namespace {

// Builds the closure of `seeds` under conjugation by `ambient`. In
// semiregular mode membership is decided from the image of 0 alone, so
// candidates are only materialized when they enlarge the group.
void closure(std::size_t degree, bool semiregular, const std::vector<Perm>& seeds,
                  const std::vector<Perm>& ambient,
                  std::shared_ptr<const StabChain>* chain_out, std::vector<Perm>* gens_out) {
  auto chain = std::make_shared<StabChain>(degree, semiregular);
  std::vector<Perm> gens;
  for (const auto& s : seeds) {
    if (chain->add(s)) gens.push_back(s);
  }
  std::vector<Perm> ambient_inv;
  ambient_inv.reserve(ambient.size());
  for (const auto& g : ambient) ambient_inv.push_back(inverse(g));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t k = 0; k < ambient.size(); ++k) {
      const Perm& g = ambient[k];
      const Perm& gi = ambient_inv[k];
      if (semiregular && chain->contains_point(g[gens[i][gi[0]]])) continue;
      Perm c = compose(compose(gi, gens[i]), g);
      if (chain->add(c)) gens.push_back(std::move(c));
    }
  }
  *chain_out = chain;
  *gens_out = std::move(gens);
}

}  // namespace

PermGroup normal_closure(const std::vector<Perm>& seeds, const PermGroup& ambient,
                         const GroupLimits& limits) {
  check_degree(ambient.degree(), limits);
  for (const auto& s : seeds) check_perm(s, ambient.degree());
  std::shared_ptr<const StabChain> chain;
  std::vector<Perm> gens;
  closure(ambient.degree(), ambient.semiregular(), seeds, ambient.generators(), &chain, &gens);
  return PermGroup(ambient.degree(), std::move(gens), ambient.semiregular(), std::move(chain));
}

PermGroup commutator_subgroup(const PermGroup& a, const PermGroup& b, const GroupLimits& limits) {
  if (a.degree() != b.degree()) {
    throw Error(ErrorKind::PreconditionViolated, "commutator_subgroup: degrees differ");
  }
  check_degree(a.degree(), limits);
  const bool semi = a.semiregular() && b.semiregular();
  std::vector<Perm> seeds;
  auto seen = std::make_shared<StabChain>(a.degree(), semi);
  std::vector<Perm> b_inv;
  if (semi) {
    for (const auto& y : b.generators()) b_inv.push_back(inverse(y));
  }
  for (const auto& x : a.generators()) {
    const Perm xi = inverse(x);
    for (std::size_t k = 0; k < b.generators().size(); ++k) {
      const Perm& y = b.generators()[k];
      if (semi) {
        // [x,y] sends 0 to y[x[y^-1[x^-1[0]]]].
        if (seen->contains_point(y[x[b_inv[k][xi[0]]]])) continue;
      }
      Perm c = commutator(x, y);
      if (seen->add(c)) seeds.push_back(std::move(c));
    }
  }
  std::vector<Perm> ambient = a.generators();
  ambient.insert(ambient.end(), b.generators().begin(), b.generators().end());
  std::shared_ptr<const StabChain> chain;
  std::vector<Perm> gens;
  closure(a.degree(), semi, seeds, ambient, &chain, &gens);
  return PermGroup(a.degree(), std::move(gens), semi, std::move(chain));
}

PermGroup derived_subgroup(const PermGroup& g, const GroupLimits& limits) {
  return commutator_subgroup(g, g, limits);
}

bool centralizes(const PermGroup& a, const PermGroup& b) {
  const bool semi = a.semiregular() && b.semiregular();
  const auto& k = simd::perm_kernels();
  Perm ab(a.degree());
  Perm ba(a.degree());
  for (const auto& x : a.generators()) {
    for (const auto& y : b.generators()) {
      if (semi) {
        if (y[x[0]] != x[y[0]]) return false;
        continue;
      }
      k.compose(x.data(), y.data(), ab.data(), x.size());
      k.compose(y.data(), x.data(), ba.data(), x.size());
      if (!k.equal(ab.data(), ba.data(), x.size())) return false;
    }
  }
  return true;
}

StructureReport structure_report(const PermGroup& g, const GroupLimits& limits) {
  check_degree(g.degree(), limits);
  StructureReport r;
  r.order = g.order();
  if (r.order > limits.max_order) {
    throw Error(ErrorKind::DegreeLimitExceeded,
                "group order " + r.order.get_str() + " exceeds the limit " + limits.max_order.get_str());
  }
  r.derived_series_orders.push_back(r.order);
  std::vector<PermGroup> series{g};
  while (series.back().order() != 1) {
    PermGroup next = derived_subgroup(series.back(), limits);
    const BigInt n = next.order();
    const bool stuck = n == series.back().order();
    r.derived_series_orders.push_back(n);
    series.push_back(std::move(next));
    if (stuck) break;
  }
  r.solvable = series.back().order() == 1;
  const PermGroup& d1 = series[1 < series.size() ? 1 : 0];
  // G trivial: G' = G.
  const PermGroup d2 = series.size() > 2 ? series[2] : derived_subgroup(d1, limits);
  r.is_derived_abelian = d2.order() == 1;
  r.second_derived_central_in_derived = centralizes(d2, d1);
  r.second_derived_central_in_whole = centralizes(d2, g);

  // Lower central series of G': gamma_1 = G', gamma_{k+1} = [gamma_k, G'].
  r.derived_lower_central_orders.push_back(d1.order());
  PermGroup gamma = d1;
  unsigned steps = 0;
  while (gamma.order() != 1) {
    PermGroup next = steps == 0 ? d2 : commutator_subgroup(gamma, d1, limits);
    const BigInt n = next.order();
    const bool stuck = n == gamma.order();
    r.derived_lower_central_orders.push_back(n);
    ++steps;
    gamma = std::move(next);
    if (stuck) break;
  }
  if (gamma.order() == 1) r.nilpotency_class_of_derived = steps;

  // In a nilpotent group the p'-part power of each generator generates the
  // Sylow p-subgroup.
  if (r.nilpotency_class_of_derived && d1.order() > 1) {
    const BigInt n = d1.order();
    for (const auto& p : prime_divisors(n)) {
      const BigInt cofactor = n / p_part(n, p);
      std::vector<Perm> gens;
      for (const auto& x : d1.generators()) {
        Perm y = power(x, cofactor);
        if (!is_identity(y)) gens.push_back(std::move(y));
      }
      const PermGroup sylow(d1.degree(), std::move(gens), d1.semiregular(), limits);
      r.derived_sylows.push_back({p, sylow.order(), centralizes(sylow, sylow)});
    }
  }
  return r;
}

}  // namespace bstri
