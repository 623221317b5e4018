#include "bstri/coset.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "bstri/error.hpp"

namespace bstri {

std::string_view to_string(Strategy s) {
  return s == Strategy::Hlt ? "hlt" : "felsch";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "hlt") return Strategy::Hlt;
  if (text == "felsch") return Strategy::Felsch;
  throw Error(ErrorKind::Usage, "unknown strategy '" + std::string(text) + "' (hlt|felsch)");
}

namespace {

using Letters = std::vector<int>;
constexpr std::int32_t kUndef = -1;

class OverflowSignal {};

void check_generators(const Presentation& pres, const Word& w, const char* what) {
  for (const auto& s : w.syllables()) {
    if (s.gen >= pres.generator_count()) {
      throw Error(ErrorKind::UndeclaredGenerator, std::string(what) + " uses an undeclared generator");
    }
  }
}

}  // namespace

// With labels enabled the subgroup is cyclic, H = <h>, and every table entry
// c.x = d also carries k with r_c x = h^k r_d (k modulo the current bound on
// the order of h). Closed scans and coincidences yield relations h^k = 1 that
// shrink the modulus.
class CosetEnumerator {
 public:
  CosetEnumerator(const Presentation& pres, const EnumLimits& limits, Strategy strategy)
      : ncols_(2 * pres.generator_count()),
        capacity_(limits.max_cosets),
        max_seconds_(limits.max_seconds),
        strategy_(strategy),
        start_(std::chrono::steady_clock::now()),
        pres_(pres) {
    result_.ngens_ = pres.generator_count();
  }

  void track_labels(std::uint64_t modulus) {
    tracked_ = true;
    mod_ = modulus;
  }
  std::uint64_t modulus() const { return mod_; }
  std::vector<std::uint64_t> take_labels() {
    labels_.resize(result_.count_ * ncols_);
    for (auto& v : labels_) v %= mod_;
    return std::move(labels_);
  }

  CosetTable run(const SubgroupSpec& sub) {
    result_.regular_ = std::all_of(sub.generators.begin(), sub.generators.end(),
                                   [](const Word& w) { return free_reduce(w).empty(); });
    std::vector<Letters> subgens;
    try {
      for (const auto& r : pres_.relators) {
        Word w = cyclic_reduce(r);
        if (w.empty()) continue;
        relators_.push_back(expand(w));
        margin_ += relators_.back().size();
      }
      if (strategy_ == Strategy::Felsch) build_conjugates();
      for (const auto& w : sub.generators) {
        Word r = free_reduce(w);
        if (!r.empty()) subgens.push_back(expand(r));
      }
      if (capacity_ < 1) throw_overflow("max_cosets must be at least 1");
      new_coset();
      for (const auto& w : subgens) {
        ensure_room(w.size() + 1);
        scan_and_fill(0, w, tracked_ ? 1 : 0);
        process_deductions();
      }
      if (ncols_ > 0) {
        if (strategy_ == Strategy::Hlt) {
          run_hlt();
        } else {
          run_felsch();
        }
      }
      while (!verify()) {
        // A verification pass that changed the table is followed by another.
      }
    } catch (const OverflowSignal&) {
      result_.status_ = EnumStatus::Overflowed;
      result_.count_ = live_;
      result_.table_.clear();
      labels_.clear();
      finish_stats();
      return std::move(result_);
    }
    compact();
    result_.status_ = EnumStatus::Complete;
    result_.count_ = live_;
    result_.table_.assign(table_.begin(), table_.begin() + static_cast<std::ptrdiff_t>(live_ * ncols_));
    finish_stats();
    return std::move(result_);
  }

 private:
  // ---- setup -------------------------------------------------------------

  Letters expand(const Word& w) {
    Letters out;
    for (const auto& s : w.syllables()) {
      const BigInt n = abs(s.exp);
      if (n > BigInt(capacity_) || n > BigInt(1) << 31) {
        throw_overflow("relator exponent " + n.get_str() + " exceeds the coset limit");
      }
      const int col = static_cast<int>(2 * s.gen + (s.exp < 0 ? 1 : 0));
      out.insert(out.end(), n.get_ui(), col);
    }
    return out;
  }

  void build_conjugates() {
    conjugates_.assign(ncols_, {});
    std::set<Letters> seen;
    for (const auto& r : relators_) {
      Letters inv(r.rbegin(), r.rend());
      for (int& c : inv) c ^= 1;
      for (const Letters* base : std::initializer_list<const Letters*>{&r, &inv}) {
        const std::size_t len = base->size();
        for (std::size_t k = 0; k < len; ++k) {
          Letters rot(len);
          for (std::size_t i = 0; i < len; ++i) rot[i] = (*base)[(k + i) % len];
          if (seen.insert(rot).second) conjugates_[rot[0]].push_back(std::move(rot));
        }
      }
    }
  }

  [[noreturn]] void throw_overflow(const std::string& why) {
    result_.overflow_reason_ = why;
    throw OverflowSignal{};
  }

  // ---- label arithmetic (mod mod_) ---------------------------------------

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    a %= mod_;
    b %= mod_;
    return a >= mod_ - b ? a - (mod_ - b) : a + b;
  }
  std::uint64_t neg(std::uint64_t a) const {
    a %= mod_;
    return a == 0 ? 0 : mod_ - a;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }

  void relation(std::uint64_t k) {
    k %= mod_;
    const std::uint64_t g = std::gcd(mod_, k);
    if (g != mod_) {
      mod_ = g;
      ++relations_;
    }
  }

  // ---- table primitives --------------------------------------------------

  std::size_t slot(std::int32_t c, int col) const {
    return static_cast<std::size_t>(c) * ncols_ + static_cast<std::size_t>(col);
  }
  std::int32_t& entry(std::int32_t c, int col) { return table_[slot(c, col)]; }
  std::uint64_t label(std::int32_t c, int col) const { return labels_[slot(c, col)]; }

  // c.col = d carrying label k, and the inverse entry.
  void set_edge(std::int32_t c, int col, std::int32_t d, std::uint64_t k) {
    entry(c, col) = d;
    entry(d, col ^ 1) = c;
    if (tracked_) {
      labels_[slot(c, col)] = k % mod_;
      labels_[slot(d, col ^ 1)] = neg(k);
    }
  }

  bool alive(std::int32_t c) const { return parent_[static_cast<std::size_t>(c)] == c; }

  std::int32_t rep(std::int32_t c) {
    std::int32_t root = c;
    while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
    while (parent_[static_cast<std::size_t>(c)] != root) {
      std::int32_t next = parent_[static_cast<std::size_t>(c)];
      parent_[static_cast<std::size_t>(c)] = root;
      c = next;
    }
    return root;
  }

  // Root of c and k with r_c = h^k r_root; compresses the path.
  std::pair<std::int32_t, std::uint64_t> rep_offset(std::int32_t c) {
    std::int32_t root = c;
    std::uint64_t total = 0;
    while (parent_[static_cast<std::size_t>(root)] != root) {
      total = add(total, offset_[static_cast<std::size_t>(root)]);
      root = parent_[static_cast<std::size_t>(root)];
    }
    std::uint64_t remaining = total;
    while (c != root) {
      const auto ci = static_cast<std::size_t>(c);
      const std::int32_t next = parent_[ci];
      const std::uint64_t own = offset_[ci];
      parent_[ci] = root;
      offset_[ci] = remaining;
      remaining = sub(remaining, own);
      c = next;
    }
    return {root, total};
  }

  std::int32_t new_coset() {
    if (allocated_ >= capacity_) {
      throw_overflow("coset limit " + std::to_string(capacity_) + " reached");
    }
    const auto c = static_cast<std::int32_t>(allocated_++);
    if (table_.size() < allocated_ * ncols_) {
      std::size_t rows = std::max<std::size_t>(1024, 2 * table_.size() / std::max<std::size_t>(ncols_, 1));
      rows = std::min(std::max(rows, allocated_), capacity_);
      table_.resize(rows * ncols_, kUndef);
      parent_.resize(rows);
      if (tracked_) {
        labels_.resize(rows * ncols_, 0);
        offset_.resize(rows, 0);
      }
    }
    parent_[static_cast<std::size_t>(c)] = c;
    if (tracked_) offset_[static_cast<std::size_t>(c)] = 0;
    ++live_;
    ++result_.stats_.cosets_defined;
    result_.stats_.max_active = std::max(result_.stats_.max_active, live_);
    if ((result_.stats_.cosets_defined & 0xfff) == 0) check_time();
    return c;
  }

  void check_time() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (elapsed > max_seconds_) throw_overflow("time limit exceeded");
  }

  void define(std::int32_t c, int col) {
    const std::int32_t d = new_coset();
    set_edge(c, col, d, 0);
    push_deduction(c, col);
  }

  void push_deduction(std::int32_t c, int col) {
    if (strategy_ != Strategy::Felsch) return;
    ++result_.stats_.deductions;
    if (deductions_.size() >= kMaxDeductions) {
      deductions_overflowed_ = true;
      return;
    }
    deductions_.emplace_back(c, col);
  }

  // ---- coincidences ------------------------------------------------------

  // Records r_k = h^lambda r_l (lambda is ignored without labels).
  void merge(std::int32_t k, std::int32_t l, std::uint64_t lambda) {
    std::uint64_t ok = 0;
    std::uint64_t ol = 0;
    if (tracked_) {
      std::tie(k, ok) = rep_offset(k);
      std::tie(l, ol) = rep_offset(l);
    } else {
      k = rep(k);
      l = rep(l);
    }
    // r_k = h^delta r_l for the roots.
    const std::uint64_t delta = tracked_ ? sub(add(lambda, ol), ok) : 0;
    if (k == l) {
      if (tracked_) relation(delta);
      return;
    }
    const std::int32_t keep = std::min(k, l);
    const std::int32_t kill = std::max(k, l);
    parent_[static_cast<std::size_t>(kill)] = keep;
    if (tracked_) offset_[static_cast<std::size_t>(kill)] = kill == k ? delta : neg(delta);
    queue_.push_back(kill);
    --live_;
    ++result_.stats_.cosets_collapsed;
  }

  void coincidence(std::int32_t a, std::int32_t b, std::uint64_t lambda) {
    merge(a, b, lambda);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const std::int32_t e = queue_[qi];
      for (int x = 0; x < static_cast<int>(ncols_); ++x) {
        const std::int32_t f = entry(e, x);
        if (f == kUndef) continue;
        entry(f, x ^ 1) = kUndef;
        if (!tracked_) {
          const std::int32_t mu = rep(e);
          const std::int32_t nu = rep(f);
          const std::int32_t mu_x = entry(mu, x);
          if (mu_x != kUndef) {
            merge(nu, mu_x, 0);
            continue;
          }
          const std::int32_t nu_xi = entry(nu, x ^ 1);
          if (nu_xi != kUndef) {
            merge(mu, nu_xi, 0);
            continue;
          }
          set_edge(mu, x, nu, 0);
          push_deduction(mu, x);
          continue;
        }
        const std::uint64_t m = label(e, x);
        const auto [mu, om] = rep_offset(e);
        const auto [nu, on] = rep_offset(f);
        // r_mu x = h^kappa r_nu.
        const std::uint64_t kappa = sub(add(m, on), om);
        const std::int32_t mu_x = entry(mu, x);
        if (mu_x != kUndef) {
          merge(mu_x, nu, sub(kappa, label(mu, x)));
          continue;
        }
        const std::int32_t nu_xi = entry(nu, x ^ 1);
        if (nu_xi != kUndef) {
          merge(nu_xi, mu, sub(neg(kappa), label(nu, x ^ 1)));
          continue;
        }
        set_edge(mu, x, nu, kappa);
        push_deduction(mu, x);
      }
    }
    queue_.clear();
  }

  // ---- scanning ----------------------------------------------------------

  // Scans r from c, defining cosets to close gaps. `target` is the label the
  // closed scan must carry: 0 for relators, 1 for h scanned from coset 0.
  void scan_and_fill(std::int32_t c, const Letters& r, std::uint64_t target = 0) {
    std::int32_t f = c;
    std::int32_t b = c;
    std::uint64_t fl = 0;
    std::uint64_t bl = 0;
    std::ptrdiff_t i = 0;
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(r.size()) - 1;
    for (;;) {
      while (i <= j) {
        const int col = r[static_cast<std::size_t>(i)];
        const std::int32_t next = entry(f, col);
        if (next == kUndef) break;
        if (tracked_) fl = add(fl, label(f, col));
        f = next;
        ++i;
      }
      if (i > j) {
        close(f, b, tracked_ ? sub(add(target, bl), fl) : 0);
        return;
      }
      while (j >= i) {
        const int col = r[static_cast<std::size_t>(j)] ^ 1;
        const std::int32_t next = entry(b, col);
        if (next == kUndef) break;
        if (tracked_) bl = add(bl, label(b, col));
        b = next;
        --j;
      }
      if (j < i) {
        close(f, b, tracked_ ? sub(add(target, bl), fl) : 0);
        return;
      }
      if (i == j) {
        const int col = r[static_cast<std::size_t>(i)];
        set_edge(f, col, b, tracked_ ? sub(add(target, bl), fl) : 0);
        push_deduction(f, col);
        return;
      }
      define(f, r[static_cast<std::size_t>(i)]);
    }
  }

  // A closed scan showed r_f = h^k r_b.
  void close(std::int32_t f, std::int32_t b, std::uint64_t k) {
    if (f != b) {
      coincidence(f, b, k);
    } else if (tracked_) {
      relation(k);
    }
  }

  // Scans r from c without defining; records deductions and coincidences.
  // Returns false when the relator has a gap of more than one entry.
  bool scan(std::int32_t c, const Letters& r) {
    std::int32_t f = c;
    std::int32_t b = c;
    std::uint64_t fl = 0;
    std::uint64_t bl = 0;
    std::ptrdiff_t i = 0;
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(r.size()) - 1;
    while (i <= j) {
      const int col = r[static_cast<std::size_t>(i)];
      const std::int32_t next = entry(f, col);
      if (next == kUndef) break;
      if (tracked_) fl = add(fl, label(f, col));
      f = next;
      ++i;
    }
    if (i > j) {
      close(f, b, tracked_ ? sub(bl, fl) : 0);
      return true;
    }
    while (j >= i) {
      const int col = r[static_cast<std::size_t>(j)] ^ 1;
      const std::int32_t next = entry(b, col);
      if (next == kUndef) break;
      if (tracked_) bl = add(bl, label(b, col));
      b = next;
      --j;
    }
    if (j < i) {
      close(f, b, tracked_ ? sub(bl, fl) : 0);
      return true;
    }
    if (i == j) {
      const int col = r[static_cast<std::size_t>(i)];
      set_edge(f, col, b, tracked_ ? sub(bl, fl) : 0);
      push_deduction(f, col);
      return true;
    }
    return false;
  }

  // ---- strategies ----------------------------------------------------------

  // Scans all relators from each coset in turn, defining as needed, then
  // fills the rest of the row.
  void run_hlt() { fill_pass(); }

  std::uint64_t change_count() const {
    return result_.stats_.cosets_defined + result_.stats_.cosets_collapsed + relations_;
  }

  bool fill_pass() {
    bool changed = false;
    for (std::size_t c = 0; c < allocated_; ++c) {
      if (!alive(static_cast<std::int32_t>(c))) continue;
      scan_ptr_ = c;
      ensure_room(margin_ + ncols_);
      c = scan_ptr_;
      const auto coset = static_cast<std::int32_t>(c);
      const std::uint64_t before = change_count();
      for (const auto& r : relators_) {
        if (!alive(coset)) break;
        scan_and_fill(coset, r);
      }
      for (int x = 0; x < static_cast<int>(ncols_); ++x) {
        if (!alive(coset)) break;
        if (entry(coset, x) == kUndef) define(coset, x);
      }
      process_deductions();
      changed |= before != change_count();
    }
    return changed;
  }

  void run_felsch() {
    process_deductions();
    std::size_t c = 0;
    int x = 0;
    for (;;) {
      // Next undefined entry of a live coset, in (coset, column) order.
      bool found = false;
      for (; c < allocated_; ++c, x = 0) {
        const auto coset = static_cast<std::int32_t>(c);
        if (!alive(coset)) continue;
        for (; x < static_cast<int>(ncols_); ++x) {
          if (entry(coset, x) == kUndef) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) return;
      scan_ptr_ = c;
      ensure_room(1);
      c = scan_ptr_;
      define(static_cast<std::int32_t>(c), x);
      process_deductions();
    }
  }

  void process_deductions() {
    if (strategy_ != Strategy::Felsch) return;
    for (;;) {
      while (!deductions_.empty()) {
        auto [c, x] = deductions_.back();
        deductions_.pop_back();
        if (!alive(c)) continue;
        for (const auto& r : conjugates_[static_cast<std::size_t>(x)]) {
          scan(c, r);
          if (!alive(c)) break;
        }
        if (!alive(c)) continue;
        const std::int32_t d = entry(c, x);
        if (d == kUndef || !alive(d)) continue;
        for (const auto& r : conjugates_[static_cast<std::size_t>(x ^ 1)]) {
          scan(d, r);
          if (!alive(d)) break;
        }
      }
      if (!deductions_overflowed_) return;
      deductions_overflowed_ = false;
      full_scan();
    }
  }

  // Scans every relator from every live coset without defining.
  void full_scan() {
    ++result_.stats_.lookaheads;
    for (std::size_t c = 0; c < allocated_; ++c) {
      const auto coset = static_cast<std::int32_t>(c);
      for (const auto& r : relators_) {
        if (!alive(coset)) break;
        scan(coset, r);
      }
    }
  }

  // Guarantees `need` free rows. Only called between scans, with scan_ptr_
  // on a live coset; compaction renumbers it.
  void ensure_room(std::size_t need) {
    if (capacity_ - allocated_ >= need) return;
    compact();
    if (capacity_ - allocated_ >= need) return;
    if (strategy_ == Strategy::Hlt) {
      // Lookahead: deductions and coincidences without new definitions.
      full_scan();
      compact();
      if (capacity_ - allocated_ >= need) return;
    }
    throw_overflow("coset limit " + std::to_string(capacity_) + " reached");
  }

  // Renumbers live cosets 0..live-1 preserving order.
  void compact() {
    if (live_ == allocated_) return;
    std::vector<std::int32_t> newnum(allocated_, kUndef);
    std::int32_t next = 0;
    for (std::size_t c = 0; c < allocated_; ++c) {
      if (alive(static_cast<std::int32_t>(c))) newnum[c] = next++;
    }
    // The scan position moves to the first live coset at or after it.
    std::size_t k = std::min(scan_ptr_, allocated_);
    while (k < allocated_ && newnum[k] == kUndef) ++k;
    const std::size_t scan = k < allocated_ ? static_cast<std::size_t>(newnum[k]) : static_cast<std::size_t>(next);
    for (std::size_t c = 0; c < allocated_; ++c) {
      if (newnum[c] == kUndef) continue;
      const auto dst = static_cast<std::size_t>(newnum[c]);
      for (std::size_t x = 0; x < ncols_; ++x) {
        const std::int32_t v = table_[c * ncols_ + x];
        table_[dst * ncols_ + x] = v == kUndef ? kUndef : newnum[static_cast<std::size_t>(v)];
        if (tracked_) labels_[dst * ncols_ + x] = labels_[c * ncols_ + x];
      }
      parent_[dst] = static_cast<std::int32_t>(dst);
      if (tracked_) offset_[dst] = 0;
    }
    std::fill(table_.begin() + static_cast<std::ptrdiff_t>(live_ * ncols_), table_.end(), kUndef);
    std::vector<std::pair<std::int32_t, int>> kept;
    for (auto [c, x] : deductions_) {
      if (newnum[static_cast<std::size_t>(c)] != kUndef) kept.emplace_back(newnum[static_cast<std::size_t>(c)], x);
    }
    deductions_ = std::move(kept);
    allocated_ = live_;
    scan_ptr_ = scan;
  }

  // Every relator must close from every live coset and every entry must be
  // defined. Returns false if the pass had to change the table.
  bool verify() { return !fill_pass(); }

  void finish_stats() {
    result_.stats_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  static constexpr std::size_t kMaxDeductions = 1u << 22;

  std::size_t ncols_;
  std::size_t capacity_;
  double max_seconds_;
  Strategy strategy_;
  std::chrono::steady_clock::time_point start_;

  std::vector<Letters> relators_;
  std::vector<std::vector<Letters>> conjugates_;

  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> parent_;
  std::size_t allocated_ = 0;
  std::size_t live_ = 0;
  std::size_t scan_ptr_ = 0;
  std::size_t margin_ = 0;
  const Presentation& pres_;
  std::vector<std::int32_t> queue_;
  std::vector<std::pair<std::int32_t, int>> deductions_;
  bool deductions_overflowed_ = false;

  bool tracked_ = false;
  std::uint64_t mod_ = 1;
  std::uint64_t relations_ = 0;
  std::vector<std::uint64_t> labels_;
  std::vector<std::uint64_t> offset_;

  CosetTable result_;
};

CosetTable enumerate(const Presentation& pres, const SubgroupSpec& sub,
                     const EnumLimits& limits, Strategy strategy) {
  for (const auto& w : sub.generators) check_generators(pres, w, "subgroup word");
  for (const auto& r : pres.relators) check_generators(pres, r, "relator");
  CosetEnumerator e(pres, limits, strategy);
  return e.run(sub);
}

CyclicEnumeration enumerate_cyclic(const Presentation& pres, const Word& h,
                                   std::uint64_t order_multiple, const EnumLimits& limits,
                                   Strategy strategy) {
  check_generators(pres, h, "subgroup word");
  for (const auto& r : pres.relators) check_generators(pres, r, "relator");
  if (order_multiple == 0 || order_multiple > (std::uint64_t{1} << 62)) {
    throw Error(ErrorKind::PreconditionViolated,
                "enumerate_cyclic: order multiple must be in [1, 2^62]");
  }
  if (free_reduce(h).empty()) {
    throw Error(ErrorKind::PreconditionViolated, "enumerate_cyclic: subgroup generator is trivial");
  }
  CosetEnumerator e(pres, limits, strategy);
  e.track_labels(order_multiple);
  CyclicEnumeration out;
  out.table = e.run(SubgroupSpec{{h}});
  if (out.table.complete()) {
    out.generator_order = e.modulus();
    out.labels = e.take_labels();
  }
  return out;
}

BigInt group_order(const CyclicEnumeration& e) {
  if (!e.table.complete()) {
    throw Error(ErrorKind::IncompleteTable, "group_order: enumeration overflowed");
  }
  return BigInt(static_cast<unsigned long>(e.table.coset_count())) *
         BigInt(static_cast<unsigned long>(e.generator_order));
}

CosetTable power_subgroup_table(const CyclicEnumeration& e, std::uint64_t m,
                                std::size_t max_degree) {
  if (!e.table.complete()) {
    throw Error(ErrorKind::IncompleteTable, "power_subgroup_table: enumeration overflowed");
  }
  if (m == 0 || e.generator_order % m != 0) {
    throw Error(ErrorKind::NotADivisor, "power_subgroup_table: m must divide the order of h");
  }
  const BigInt degree = BigInt(static_cast<unsigned long>(e.table.coset_count())) *
                        BigInt(static_cast<unsigned long>(m));
  if (degree > BigInt(static_cast<unsigned long>(max_degree)) || degree >= BigInt(1) << 31) {
    throw Error(ErrorKind::DegreeLimitExceeded, "degree " + degree.get_str() +
                                                    " exceeds the limit " + std::to_string(max_degree));
  }
  const std::size_t cols = e.table.columns();
  const std::size_t n = e.table.coset_count() * m;
  CosetTable t;
  t.ngens_ = e.table.generator_count();
  t.count_ = n;
  t.status_ = EnumStatus::Complete;
  t.regular_ = m == e.generator_order;
  t.stats_ = e.table.stats();
  t.table_.resize(n * cols);
  // (<h^m> h^k r_c) x = <h^m> h^(k+l) r_d when r_c x = h^l r_d.
  for (std::size_t c = 0; c < e.table.coset_count(); ++c) {
    for (std::size_t x = 0; x < cols; ++x) {
      const std::size_t d = e.table.act(static_cast<std::uint32_t>(c), x);
      const std::size_t l = e.labels[c * cols + x] % m;
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t kk = k + l >= m ? k + l - m : k + l;
        t.table_[(c * m + k) * cols + x] = static_cast<std::int32_t>(d * m + kk);
      }
    }
  }
  return t;
}

CosetTable induced_regular_table(const CyclicEnumeration& e, std::size_t max_degree) {
  return power_subgroup_table(e, e.generator_order == 0 ? 1 : e.generator_order, max_degree);
}

std::uint64_t core_exponent(const CyclicEnumeration& e, const Word& h) {
  const WordEvaluator eval(e.table);
  const std::size_t n = e.table.coset_count();
  std::vector<bool> seen(n, false);
  BigInt order = 1;
  for (std::uint32_t c = 0; c < n; ++c) {
    if (seen[c]) continue;
    std::uint64_t len = 0;
    for (std::uint32_t d = c; !seen[d]; d = eval.apply(d, h)) {
      seen[d] = true;
      ++len;
    }
    order = lcm(order, BigInt(static_cast<unsigned long>(len)));
  }
  return order.get_ui();
}

Presentation reduce_power_relators(const Presentation& pres,
                                   const std::map<GenId, BigInt>& order_multiples) {
  Presentation out{pres.alphabet, {}};
  for (const auto& r : pres.relators) {
    Word w = cyclic_reduce(r);
    if (w.syllable_count() == 1) {
      const Syllable& s = w.syllables().front();
      if (auto it = order_multiples.find(s.gen); it != order_multiples.end() && it->second != 0) {
        out.relators.push_back(Word::generator(s.gen, gcd(s.exp, it->second)));
        continue;
      }
    }
    out.relators.push_back(r);
  }
  return out;
}

namespace {

void require_complete(const CosetTable& t) {
  if (!t.complete()) {
    throw Error(ErrorKind::IncompleteTable, "coset table is not complete");
  }
}

}  // namespace

std::vector<std::uint32_t> permutation_image(const CosetTable& t, GenId g) {
  require_complete(t);
  if (g >= t.generator_count()) {
    throw Error(ErrorKind::UndeclaredGenerator, "permutation_image: generator out of range");
  }
  std::vector<std::uint32_t> perm(t.coset_count());
  for (std::uint32_t c = 0; c < perm.size(); ++c) perm[c] = t.act(c, g, false);
  return perm;
}

WordEvaluator::WordEvaluator(const CosetTable& t) : degree_(t.coset_count()) {
  require_complete(t);
  cycles_.resize(t.generator_count());
  for (GenId g = 0; g < t.generator_count(); ++g) {
    Cycles& cy = cycles_[g];
    cy.cycle_of.assign(degree_, UINT32_MAX);
    cy.position.assign(degree_, 0);
    cy.members.reserve(degree_);
    for (std::uint32_t c = 0; c < degree_; ++c) {
      if (cy.cycle_of[c] != UINT32_MAX) continue;
      const auto id = static_cast<std::uint32_t>(cy.start.size());
      cy.start.push_back(static_cast<std::uint32_t>(cy.members.size()));
      std::uint32_t len = 0;
      for (std::uint32_t d = c; cy.cycle_of[d] == UINT32_MAX; d = t.act(d, g, false)) {
        cy.cycle_of[d] = id;
        cy.position[d] = len++;
        cy.members.push_back(d);
      }
      cy.length.push_back(len);
    }
  }
}

std::uint32_t WordEvaluator::apply(std::uint32_t coset, GenId g, const BigInt& exp) const {
  const Cycles& cy = cycles_.at(g);
  const std::uint32_t id = cy.cycle_of[coset];
  const std::uint32_t len = cy.length[id];
  const std::uint64_t shift = mod(exp, len).get_ui();
  const std::uint64_t pos = (cy.position[coset] + shift) % len;
  return cy.members[cy.start[id] + pos];
}

std::uint32_t WordEvaluator::apply(std::uint32_t coset, const Word& w) const {
  for (const auto& s : w.syllables()) coset = apply(coset, s.gen, s.exp);
  return coset;
}

bool WordEvaluator::acts_trivially(const Word& w) const {
  for (std::uint32_t c = 0; c < degree_; ++c) {
    if (apply(c, w) != c) return false;
  }
  return true;
}

BigInt element_order(const CosetTable& t, const Word& w) {
  require_complete(t);
  if (!t.regular()) {
    throw Error(ErrorKind::NotRegular, "element_order needs an enumeration over the trivial subgroup");
  }
  if (free_reduce(w).empty()) return 1;
  const WordEvaluator eval(t);
  // Regular action: the order is the length of the cycle through coset 0.
  std::uint64_t order = 1;
  for (std::uint32_t c = eval.apply(0, w); c != 0; c = eval.apply(c, w)) ++order;
  return BigInt(order);
}

bool is_trivial_in_quotient(const CosetTable& t, const Word& w) {
  require_complete(t);
  const WordEvaluator eval(t);
  if (t.regular()) return eval.apply(0, w) == 0;
  return eval.acts_trivially(w);
}

std::string dump_table(const CosetTable& t) {
  std::string out = "cosets: " + std::to_string(t.coset_count()) +
                    " status: " + (t.complete() ? "complete" : "overflowed") + "\n";
  if (!t.complete()) return out;
  for (std::uint32_t c = 0; c < t.coset_count(); ++c) {
    for (std::size_t x = 0; x < t.columns(); ++x) {
      if (x > 0) out += ' ';
      out += std::to_string(t.act(c, x) + 1);
    }
    out += '\n';
  }
  return out;
}

}  // namespace bstri
