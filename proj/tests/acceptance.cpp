// Acceptance suite: one PASS/FAIL line per criterion.

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bstri/decide.hpp"

using namespace bstri;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string secs(double s) {
  std::ostringstream o;
  o.precision(3);
  o << s << "s";
  return o.str();
}

TriangleParams P(long a, long b, long c, long d, long e, long f) {
  return TriangleParams(a, b, c, d, e, f);
}

Presentation bare_G(const TriangleParams& p) {
  Presentation g;
  g.alphabet = Alphabet({"x", "y", "z"});
  g.relators = {conjugation_relator(kX, p.a(), kY, p.b()), conjugation_relator(kY, p.c(), kZ, p.d()),
                conjugation_relator(kZ, p.e(), kX, p.f())};
  return g;
}

struct Result {
  bool pass = false;
  std::string text;
};

// Orders collected along the way, rechecked with the other strategy.
struct OrderRecord {
  std::string what;
  Presentation pres;
  BigInt x_multiple;  // 0: enumerate over the trivial subgroup
  BigInt order;
};

struct Suite {
  unsigned workers = 4;
  std::size_t max_degree = 8'000'000;
  std::vector<OrderRecord> orders;
  std::vector<QuotientReport> sweep;
  double sweep_seconds = 0;
  std::string sweep_error;
};

Result criterion1(Suite& s) {
  const auto t0 = Clock::now();
  const CosetTable q = enumerate(build_Q(P(1, 2, 1, 2, 1, 2)), {}, {});
  const double tq = since(t0);
  const auto t1 = Clock::now();
  const Presentation g = bare_G(P(1, 2, 1, 2, 1, 2));
  const CosetTable b = enumerate(g, {}, {});
  const double tg = since(t1);
  const bool ok = q.complete() && q.coset_count() == 1 && b.complete() && b.coset_count() == 1 &&
                  tq < 1 && tg < 1;
  s.orders.push_back({"Q(1,2;1,2;1,2)", build_Q(P(1, 2, 1, 2, 1, 2)), 0, 1});
  s.orders.push_back({"G(1,2;1,2;1,2)", g, 0, 1});
  return {ok, "Q(1,2;1,2;1,2) order " + std::to_string(q.coset_count()) + " in " + secs(tq) +
                  "; G(1,2;1,2;1,2) with no order relators order " +
                  (b.complete() ? std::to_string(b.coset_count()) : "overflow") + " in " + secs(tg)};
}

// Bare enumeration of G, HLT then Felsch, within the time budget.
std::string bare_triviality(Suite& s, const TriangleParams& p, double budget, bool& ok) {
  const Presentation g = bare_G(p);
  std::string text = "G(" + format_params(p) + ")";
  for (Strategy st : {Strategy::Hlt, Strategy::Felsch}) {
    EnumLimits l;
    l.max_seconds = budget / 2;
    const auto t0 = Clock::now();
    const CosetTable t = enumerate(g, {}, l, st);
    const double dt = since(t0);
    text += std::string(" ") + std::string(to_string(st)) + ": ";
    if (t.complete()) {
      text += "order " + std::to_string(t.coset_count()) + " in " + secs(dt);
      ok = ok && t.coset_count() == 1;
      s.orders.push_back({"G(" + format_params(p) + ")", g, 0, 1});
      return text;
    }
    text += "overflow after " + std::to_string(t.stats().cosets_defined) + " cosets (" +
            t.overflow_reason() + ")";
  }
  ok = false;
  // What is still known: the order exponents and bounds of Q, which equals G
  // when some parameter is 1.
  const auto n = order_exponents(p);
  const OrderBounds b = order_bounds(p);
  const CosetTable q = enumerate(build_Q(p), {}, {});
  text += "; Q route: N = (" + n[0]->get_str() + "," + n[1]->get_str() + "," + n[2]->get_str() +
          "), L = " + b.L->get_str() + ", M = " + b.M->get_str() + ", |Q| = " +
          std::to_string(q.coset_count()) + " (not a bare enumeration of G)";
  return text;
}

Result criterion2(Suite& s) {
  bool ok = true;
  std::string text = bare_triviality(s, P(1, 2, 2, 3, 1, 2), 10, ok);
  text += "; " + bare_triviality(s, P(2, 3, 3, 4, 1, 2), 10, ok);
  return {ok, text};
}

Result criterion3(Suite& s) {
  const auto t0 = Clock::now();
  AnalysisOptions o;
  o.per_prime = false;
  const TriangleParams p = P(1, 2, 1, 2, 1, 3);
  const QuotientReport r = analyze_Q(p, o);
  const double dt = since(t0);
  bool ok = r.complete && r.order == 6 && r.structure &&
            r.structure->report.derived_series_orders == std::vector<BigInt>{6, 3, 1} &&
            r.element_orders == std::array<BigInt, 3>{1, 3, 2} && r.bounds && *r.bounds->L == 6 &&
            *r.bounds->M == 4 && *r.bounds->ratio == 1 && r.bounds->ratio_divides_M && dt < 1;
  s.orders.push_back({"Q(1,2;1,2;1,3)", build_Q(p), 1, r.order});
  std::string series;
  if (r.structure)
    for (const auto& v : r.structure->report.derived_series_orders) series += " " + v.get_str();
  return {ok, "order " + r.order.get_str() + ", derived series" + series + ", element orders " +
                  (r.element_orders ? (*r.element_orders)[0].get_str() + " " +
                                          (*r.element_orders)[1].get_str() + " " +
                                          (*r.element_orders)[2].get_str()
                                    : "?") +
                  ", L " + (r.bounds ? r.bounds->L->get_str() : "?") + ", M " +
                  (r.bounds ? r.bounds->M->get_str() : "?") + ", ratio " +
                  (r.bounds && r.bounds->ratio ? r.bounds->ratio->get_str() : "?") + ", " + secs(dt)};
}

Result criterion4(Suite& s) {
  const auto t0 = Clock::now();
  AnalysisOptions o;
  o.group.max_degree = s.max_degree;
  const TriangleParams p = P(1, 4, 1, 4, 1, 4);
  const QuotientReport r = analyze_Qp(p, 3, o);
  const double dt = since(t0);
  if (!r.complete || !r.structure) return {false, "Q_3 analysis incomplete: " + r.overflow_reason};
  const StructureReport& sr = r.structure->report;
  const bool ok = r.order_relators == std::array<BigInt, 3>{81, 81, 81} && !sr.is_derived_abelian &&
                  sr.nilpotency_class_of_derived == 2u && sr.second_derived_central_in_derived &&
                  r.structure->faithful && dt < 600;
  s.orders.push_back({"Q_3(1,4;1,4;1,4)", build_Qp(p, 3), 81, r.order});
  return {ok, "order " + r.order.get_str() + ", derived abelian " +
                  (sr.is_derived_abelian ? "yes" : "no") + ", class of derived " +
                  (sr.nilpotency_class_of_derived ? std::to_string(*sr.nilpotency_class_of_derived)
                                                  : "not nilpotent") +
                  ", second derived central in derived " +
                  (sr.second_derived_central_in_derived ? "yes" : "no") + ", " + secs(dt)};
}

void run_sweep(Suite& s) {
  std::vector<TriangleParams> tuples;
  for (long b = 2; b <= 4; ++b)
    for (long d = 2; d <= 4; ++d)
      for (long f = 2; f <= 4; ++f) tuples.push_back(P(1, b, 1, d, 1, f));
  s.sweep.resize(tuples.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tuples.size();) {
      AnalysisOptions o;
      o.group.max_degree = s.max_degree;
      try {
        s.sweep[i] = analyze_Q(tuples[i], o);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        s.sweep_error += format_params(tuples[i]) + ": " + e.what() + "; ";
        s.sweep[i].input = tuples[i];
      }
    }
  };
  const auto t0 = Clock::now();
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < s.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  s.sweep_seconds = since(t0);
  for (const auto& r : s.sweep)
    if (r.complete) s.orders.push_back({"Q(" + format_params(r.params) + ")", build_Q(r.params),
                                        r.order_relators[0], r.order});
}

Result criterion5(Suite& s) {
  std::size_t complete = 0, violations = 0;
  for (const auto& r : s.sweep) {
    if (!r.complete) continue;
    ++complete;
    if (!r.bounds || !r.bounds->L_divides_order || !r.bounds->ratio_divides_M) ++violations;
  }
  const bool ok = complete == 27 && violations == 0 && s.sweep_error.empty() &&
                  s.sweep_seconds < 1800;
  return {ok, std::to_string(complete) + "/27 complete, " + std::to_string(violations) +
                  " bound violations, " + std::to_string(s.workers) + " workers, " +
                  secs(s.sweep_seconds) + (s.sweep_error.empty() ? "" : "; errors: " + s.sweep_error)};
}

Result criterion6(Suite& s) {
  std::size_t checked = 0, violations = 0, unevaluated = 0;
  std::string detail;
  for (const auto& r : s.sweep) {
    if (!r.complete) continue;
    const std::array<BigInt, 3> diffs{r.params.b() - r.params.a(), r.params.d() - r.params.c(),
                                      r.params.f() - r.params.e()};
    for (const auto& pr : r.per_prime) {
      int count = 0;
      for (const auto& d : diffs) count += divides(pr.prime, d);
      if (count == 0 || count == 3) continue;
      ++checked;
      if (!pr.derived_abelian || !pr.sylow_of_derived_abelian) {
        ++unevaluated;
        detail += " " + format_params(r.params) + " p=" + pr.prime.get_str() + " unevaluated;";
        continue;
      }
      if (!*pr.derived_abelian || !*pr.sylow_of_derived_abelian) {
        ++violations;
        detail += " " + format_params(r.params) + " p=" + pr.prime.get_str() + ";";
      }
    }
  }
  return {checked > 0 && violations == 0 && unevaluated == 0,
          std::to_string(checked) + " (tuple, prime) pairs, Q_p' and the Sylow p-subgroup of Q' "
                                    "both checked, " +
              std::to_string(violations) + " violations, " + std::to_string(unevaluated) +
              " unevaluated" + detail};
}

Result criterion7(Suite&) {
  struct Row {
    TriangleParams p;
    Outcome outcome;
    std::optional<std::string> family;
    bool reported_infinite;
  };
  const std::vector<Row> rows = {
      {P(1, 2, 1, 2, 1, 2), Outcome::NotDevelopable, std::nullopt, false},
      {P(2, 3, 2, 3, 2, 4), Outcome::NotDevelopable, std::nullopt, false},
      {P(3, -3, 5, -5, 7, -7), Outcome::Developable, "SC1", false},
      {P(2, 3, 1, 1, 1, 1), Outcome::Developable, "SC2", false},
      {P(3, 5, 1, 1, 1, -1), Outcome::Developable, "SC3", false},
      {P(1, -1, 1, -1, 1, -1), Outcome::Developable, "SC1", false},
      {P(2, 3, 2, 3, 2, 3), Outcome::Unknown, std::nullopt, true},
      {P(3, 4, 3, 4, 3, 4), Outcome::Unknown, std::nullopt, true},
  };
  const auto t0 = Clock::now();
  std::mt19937 rng(1);
  const auto& group = move_group();
  std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
  std::size_t bad = 0;
  std::string detail;
  for (const auto& row : rows) {
    const Verdict v = decide(row.p);
    bool annotated = false;
    for (const auto& a : v.annotations) annotated |= a.rfind("reported-infinite", 0) == 0;
    bool ok = v.outcome == row.outcome && v.family == row.family && annotated == row.reported_infinite;
    for (int i = 0; i < 50; ++i) {
      const TriangleParams q = apply_moves(row.p, group[pick(rng)]);
      const Verdict w = decide(q);
      ok = ok && w.outcome == v.outcome && w.family == v.family && w.annotations.size() == v.annotations.size();
    }
    if (!ok) {
      ++bad;
      detail += " " + format_params(row.p) + " -> " + std::string(to_string(v.outcome)) +
                (v.family ? " " + *v.family : "");
    }
  }
  const double dt = since(t0);
  return {bad == 0 && dt < 1, std::to_string(rows.size()) + " rows, 50 random move perturbations each, " +
                                  std::to_string(bad) + " mismatches, " + secs(dt) + detail};
}

Result criterion8(Suite& s) {
  std::size_t checks = 0, violations = 0, unevaluated = 0, quotients = 0;
  std::string detail;
  for (const auto& r : s.sweep) {
    if (!r.complete) continue;
    ++quotients;
    bool killer = false;
    for (const auto& c : r.relation_checks) {
      killer |= c.name.rfind("killer", 0) == 0;
      ++checks;
      if (!c.holds) {
        ++unevaluated;
        detail += " " + format_params(r.params) + " " + c.name + " (" + c.note + ");";
      } else if (!*c.holds) {
        ++violations;
        detail += " " + format_params(r.params) + " " + c.name + ";";
      }
    }
    if (!killer) ++unevaluated;
  }
  return {quotients > 0 && violations == 0 && unevaluated == 0,
          std::to_string(checks) + " checks over " + std::to_string(quotients) + " quotients, " +
              std::to_string(violations) + " violations, " + std::to_string(unevaluated) +
              " unevaluated" + detail};
}

Result criterion9(Suite&) {
  const auto t0 = Clock::now();
  const AffineCheck a = affine_check();
  const double dt = since(t0);
  return {a.ok && a.lattice_rank == 3 && dt < 0.1,
          std::string("relations ") + (a.relations[0] && a.relations[1] && a.relations[2] ? "hold" : "fail") +
              ", translation lattice rank " + std::to_string(a.lattice_rank) + ", " + secs(dt)};
}

Result criterion10(Suite& s) {
  std::size_t agree = 0, disagree = 0;
  std::string detail;
  for (const auto& rec : s.orders) {
    BigInt other;
    AnalysisOptions o;
    o.strategy = Strategy::Felsch;
    o.max_eval_degree = 0;
    if (rec.x_multiple == 0) {
      const CosetTable t = enumerate(rec.pres, {}, {}, Strategy::Felsch);
      if (t.complete()) other = static_cast<unsigned long>(t.coset_count());
    } else {
      const QuotientEnumeration e = enumerate_quotient(rec.pres, rec.x_multiple, o);
      if (e.complete) other = e.order;
    }
    if (other == rec.order) {
      ++agree;
    } else {
      ++disagree;
      detail += " " + rec.what + " hlt " + rec.order.get_str() + " felsch " + other.get_str() + ";";
    }
  }
  std::size_t ab_agree = 0, ab_disagree = 0;
  for (const auto& r : s.sweep) {
    if (!r.complete) continue;
    const Presentation q = build_Q(r.params);
    const AbelianInvariants inv = abelianization(q);
    if (!inv.finite()) continue;
    Presentation qa = q;
    const Word x = Word::generator(kX), y = Word::generator(kY), z = Word::generator(kZ);
    qa.relators.push_back(commutator(x, y));
    qa.relators.push_back(commutator(y, z));
    qa.relators.push_back(commutator(x, z));
    const CosetTable t = enumerate(qa, {}, {});
    if (t.complete() && BigInt(static_cast<unsigned long>(t.coset_count())) == *inv.order()) {
      ++ab_agree;
    } else {
      ++ab_disagree;
      detail += " abelianization of Q(" + format_params(r.params) + ");";
    }
  }
  return {disagree == 0 && ab_disagree == 0 && agree > 0 && ab_agree > 0,
          "HLT and Felsch agree on " + std::to_string(agree) + "/" + std::to_string(agree + disagree) +
              " orders; SNF agrees with commutator-adjoined enumeration on " +
              std::to_string(ab_agree) + "/" + std::to_string(ab_agree + ab_disagree) +
              " sweep instances" + detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  Suite s;
  std::vector<int> known_red;
  std::string out_path;
  app.add_option("--workers", s.workers, "Sweep worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-degree", s.max_degree, "Largest permutation degree for structure");
  app.add_option("--known-red", known_red,
                 "Criteria whose failure is documented; still printed as FAIL but not counted");
  app.add_option("--out", out_path, "Also write the result lines to this file");
  CLI11_PARSE(app, argc, argv);
  std::ofstream out_file;
  if (!out_path.empty()) out_file.open(out_path);

  const std::vector<std::function<Result(Suite&)>> criteria = {
      criterion1, criterion2, criterion3, criterion4, nullptr,
      criterion5, criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0, n = 0;
  for (const auto& c : criteria) {
    if (!c) {
      run_sweep(s);
      continue;
    }
    ++n;
    Result r;
    try {
      r = c(s);
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const bool documented = std::find(known_red.begin(), known_red.end(), n) != known_red.end();
    const std::string line = std::string(r.pass ? "PASS" : "FAIL") + " criterion " +
                             std::to_string(n) + ": " + r.text +
                             (!r.pass && documented ? " [known red, see decisions ledger]" : "");
    std::cout << line << std::endl;
    if (out_file) out_file << line << std::endl;
    if (!r.pass && !documented) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
