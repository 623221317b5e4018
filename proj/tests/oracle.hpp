#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library beyond reading Word syllables.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "bstri/word.hpp"

namespace oracle {

// Letters: generator g is 2g, its inverse 2g+1.
using Letters = std::vector<int>;

inline std::optional<Letters> letters(const bstri::Word& w, std::size_t max_len = 100000) {
  Letters out;
  for (const auto& s : w.syllables()) {
    const bstri::BigInt len = abs(s.exp);
    if (len > max_len || out.size() + len.get_ui() > max_len) return std::nullopt;
    const long n = s.exp.get_si();
    for (long i = 0; i < std::abs(n); ++i) out.push_back(2 * static_cast<int>(s.gen) + (n < 0));
  }
  return out;
}

// Plain HLT coset enumeration over the trivial subgroup, following the
// textbook scan-and-fill and coincidence routines. Returns the index, or
// nullopt when more than max_cosets cosets are defined.
class NaiveTC {
 public:
  NaiveTC(int ngens, std::vector<Letters> relators, std::vector<Letters> subgroup = {})
      : cols_(2 * ngens), rels_(std::move(relators)), sub_(std::move(subgroup)) {}

  std::optional<std::size_t> run(std::size_t max_cosets) {
    max_ = max_cosets;
    new_coset();
    for (const auto& w : sub_) {
      scan_and_fill(0, w);
      if (overflow_) return std::nullopt;
    }
    for (int a = 0; a < static_cast<int>(p_.size()); ++a) {
      for (const auto& r : rels_) {
        if (p_[a] != a) break;
        scan_and_fill(a, r);
        if (overflow_) return std::nullopt;
      }
      for (int x = 0; x < cols_ && p_[a] == a; ++x) {
        if (t_[a][x] < 0) define(a, x);
        if (overflow_) return std::nullopt;
      }
    }
    std::size_t live = 0;
    for (int a = 0; a < static_cast<int>(p_.size()); ++a) live += p_[a] == a;
    return live;
  }

 private:
  static int inv(int x) { return x ^ 1; }

  int new_coset() {
    t_.emplace_back(cols_, -1);
    p_.push_back(static_cast<int>(p_.size()));
    return static_cast<int>(p_.size()) - 1;
  }

  void define(int a, int x) {
    if (p_.size() >= max_) {
      overflow_ = true;
      return;
    }
    const int b = new_coset();
    t_[a][x] = b;
    t_[b][inv(x)] = a;
  }

  int rep(int k) {
    int l = k;
    while (p_[l] != l) l = p_[l];
    while (p_[k] != l) {
      const int n = p_[k];
      p_[k] = l;
      k = n;
    }
    return l;
  }

  void merge(int k, int l, std::deque<int>& q) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    p_[l] = k;
    q.push_back(l);
  }

  void coincidence(int a, int b) {
    std::deque<int> q;
    merge(a, b, q);
    while (!q.empty()) {
      const int g = q.front();
      q.pop_front();
      for (int x = 0; x < cols_; ++x) {
        const int d = t_[g][x];
        if (d < 0) continue;
        t_[d][inv(x)] = -1;
        const int m = rep(g), n = rep(d);
        if (t_[m][x] >= 0) {
          merge(n, t_[m][x], q);
        } else if (t_[n][inv(x)] >= 0) {
          merge(m, t_[n][inv(x)], q);
        } else {
          t_[m][x] = n;
          t_[n][inv(x)] = m;
        }
      }
    }
  }

  void scan_and_fill(int a, const Letters& w) {
    const int r = static_cast<int>(w.size());
    int f = a, b = a, i = 0, j = r - 1;
    for (;;) {
      while (i < r && t_[f][w[i]] >= 0) f = t_[f][w[i++]];
      if (i == r) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && t_[b][inv(w[j])] >= 0) b = t_[b][inv(w[j--])];
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        t_[f][w[i]] = b;
        t_[b][inv(w[i])] = f;
        return;
      }
      define(f, w[i]);
      if (overflow_) return;
    }
  }

  int cols_;
  std::vector<Letters> rels_, sub_;
  std::vector<std::vector<int>> t_;
  std::vector<int> p_;
  std::size_t max_ = 0;
  bool overflow_ = false;
};

inline std::optional<std::size_t> naive_order(const bstri::Presentation& pres,
                                              std::size_t max_cosets = 2'000'000) {
  std::vector<Letters> rels;
  for (const auto& r : pres.relators) {
    auto l = letters(r);
    if (!l) return std::nullopt;
    if (!l->empty()) rels.push_back(std::move(*l));
  }
  return NaiveTC(static_cast<int>(pres.generator_count()), std::move(rels)).run(max_cosets);
}

// Brute-force permutation groups: every element is listed.
using P = std::vector<int>;

inline P mul(const P& a, const P& b) {  // a first
  P out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[a[i]];
  return out;
}

inline P inv(const P& a) {
  P out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[a[i]] = static_cast<int>(i);
  return out;
}

inline std::set<P> closure(const std::vector<P>& gens, std::size_t n) {
  P id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<P> seen{id};
  std::deque<P> q{id};
  while (!q.empty()) {
    P g = q.front();
    q.pop_front();
    for (const auto& s : gens) {
      P h = mul(g, s);
      if (seen.insert(h).second) q.push_back(std::move(h));
    }
  }
  return seen;
}

inline std::set<P> derived(const std::set<P>& g, std::size_t n) {
  std::vector<P> comms;
  std::set<P> distinct;
  for (const auto& a : g)
    for (const auto& b : g) distinct.insert(mul(mul(inv(a), inv(b)), mul(a, b)));
  comms.assign(distinct.begin(), distinct.end());
  return closure(comms, n);
}

// Determinantal divisors d_k = gcd of k x k minors; invariant factors are
// d_k / d_(k-1). Small integer matrices only.
inline long det(std::vector<std::vector<long>> m) {
  const std::size_t n = m.size();
  long sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;  // Bareiss
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline std::vector<long> invariant_factors(const std::vector<std::vector<long>>& a) {
  const std::size_t rows = a.size(), cols = a.empty() ? 0 : a[0].size();
  const std::size_t r = std::min(rows, cols);
  std::vector<long> d{1};
  for (std::size_t k = 1; k <= r; ++k) {
    long g = 0;
    std::vector<std::size_t> ri(k), ci(k);
    // Enumerate k-subsets of rows and columns.
    auto next_subset = [](std::vector<std::size_t>& s, std::size_t n) {
      std::size_t k = s.size();
      for (std::size_t i = k; i-- > 0;) {
        if (s[i] < n - k + i) {
          ++s[i];
          for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    std::iota(ri.begin(), ri.end(), 0);
    do {
      std::iota(ci.begin(), ci.end(), 0);
      do {
        std::vector<std::vector<long>> m(k, std::vector<long>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a[ri[i]][ci[j]];
        g = std::gcd(g, std::labs(det(m)));
      } while (next_subset(ci, cols));
    } while (next_subset(ri, rows));
    d.push_back(g);
    if (g == 0) break;
  }
  std::vector<long> out;
  for (std::size_t k = 1; k < d.size(); ++k) out.push_back(d[k] == 0 ? 0 : d[k] / d[k - 1]);
  while (out.size() < cols) out.push_back(0);
  return out;
}

}  // namespace oracle
