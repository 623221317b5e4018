#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bstri/error.hpp"

namespace bstri::cli {

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Developable:
      return 0;
    case Outcome::NotDevelopable:
      return 1;
    case Outcome::Unknown:
      return 2;
  }
  return kExitInternal;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string yes_no(const std::optional<bool>& b) { return b ? (*b ? "yes" : "no") : "n/a"; }

std::string join(const std::vector<BigInt>& v, const char* sep = " ") {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : sep) + x.get_str();
  return out;
}

json refusal_json(const Error& e) {
  return {{"refusal", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
}

void print_evidence(std::ostream& out, const std::vector<EvidenceStep>& ev,
                    const std::vector<std::string>& annotations) {
  out << "evidence:\n";
  for (const auto& s : ev) out << "  [" << s.rule << "] " << s.detail << '\n';
  if (!annotations.empty()) {
    out << "annotations:\n";
    for (const auto& a : annotations) out << "  " << a << '\n';
  }
}

void print_quotient(std::ostream& out, const QuotientReport& r) {
  out << (r.prime ? "Q_" + r.prime->get_str() : std::string("Q")) << '(' << format_params(r.params)
      << ")";
  if (!r.moves.empty()) out << " from " << format_params(r.input) << " via " << format_moves(r.moves);
  out << '\n';
  out << "order relators: x^" << r.order_relators[0] << " y^" << r.order_relators[1] << " z^"
      << r.order_relators[2] << '\n';
  if (r.prime) out << "recipe: p-part of order exponent\n";
  out << "method: " << r.method << '\n';
  if (!r.complete) {
    out << "status: overflowed (" << r.overflow_reason << ")\n";
    out << "abelian invariants: " << format_invariants(r.abelian_invariants) << '\n';
    return;
  }
  out << "order: " << r.order << '\n';
  if (r.element_orders)
    out << "element orders: x=" << (*r.element_orders)[0] << " y=" << (*r.element_orders)[1]
        << " z=" << (*r.element_orders)[2] << '\n';
  out << "abelian invariants: " << format_invariants(r.abelian_invariants) << '\n';
  if (r.structure) {
    const auto& s = r.structure->report;
    out << "structure of: " << r.structure->source;
    if (!r.structure->faithful) out << " (kernel order " << r.structure->kernel_order << ")";
    out << '\n';
    out << "derived series orders: " << join(s.derived_series_orders) << '\n';
    out << "derived-abelian: " << (s.is_derived_abelian ? "true" : "false") << '\n';
    out << "nilpotency class of derived: "
        << (s.nilpotency_class_of_derived ? std::to_string(*s.nilpotency_class_of_derived)
                                          : std::string("not nilpotent"))
        << '\n';
    out << "second derived central in derived: " << yes_no(s.second_derived_central_in_derived)
        << '\n';
    out << "second derived central in whole: " << yes_no(s.second_derived_central_in_whole) << '\n';
  }
  if (!r.structure_note.empty()) out << "structure note: " << r.structure_note << '\n';
  if (r.bounds) {
    const auto& b = *r.bounds;
    out << "L: " << (b.L ? b.L->get_str() : "overflow") << "  M: "
        << (b.M ? b.M->get_str() : "overflow") << "  |Q|/L: "
        << (b.ratio ? b.ratio->get_str() : "n/a") << "  divides M: " << yes_no(b.ratio_divides_M)
        << '\n';
  }
  for (const auto& c : r.relation_checks) {
    out << "relation " << c.name << ": " << yes_no(c.holds);
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << '\n';
  }
  for (const auto& p : r.per_prime) {
    out << "p=" << p.prime << ": |Q_p| " << (p.complete ? p.order.get_str() : "overflow")
        << ", Q_p' abelian " << yes_no(p.derived_abelian) << ", Sylow of Q' abelian "
        << yes_no(p.sylow_of_derived_abelian)
        << ", criterion expects abelian " << yes_no(p.criterion_expected) << ", structural order "
        << (p.structural_order ? p.structural_order->get_str() : "n/a") << '\n';
  }
  out << "seconds: " << r.seconds << '\n';
}

struct Common {
  bool json = false;
  std::size_t cosets = EnumLimits{}.max_cosets;
  double seconds = EnumLimits{}.max_seconds;
  std::string strategy = "hlt";
  std::size_t max_degree = GroupLimits{}.max_degree;

  EnumLimits limits() const { return {cosets, seconds}; }
  AnalysisOptions options() const {
    AnalysisOptions o;
    o.limits = limits();
    o.strategy = parse_strategy(strategy);
    o.group.max_degree = max_degree;
    return o;
  }
};

void add_limits(CLI::App* sub, Common& c) {
  sub->add_option("--limits-cosets", c.cosets, "Maximum live cosets");
  sub->add_option("--limits-seconds", c.seconds, "Time limit per enumeration");
  sub->add_option("--strategy", c.strategy, "hlt or felsch")
      ->check(CLI::IsMember({"hlt", "felsch"}));
  sub->add_option("--max-degree", c.max_degree, "Largest permutation degree for structure");
}

void emit(std::ostream& out, const Common& c, std::string_view command, json input, json result,
          Clock::time_point t0) {
  out << report_file(command, std::move(input), std::move(result), since(t0), c.limits()).dump()
      << '\n';
}

// Swaps partners so that each pair is increasing. Refuses equal members.
TriangleParams ordered(const TriangleParams& p) {
  TriangleParams q = p;
  for (unsigned i = 0; i < 3; ++i) {
    if (q.first(i) == q.second(i))
      throw Error(ErrorKind::PreconditionViolated,
                  "pair " + std::to_string(i) + " has equal members; no ordering a < b exists");
    if (q.first(i) > q.second(i)) q = apply_move(q, {MoveKind::SwapPartners, i});
  }
  return q;
}

std::string file_stem(const TriangleParams& p) {
  std::string out;
  for (const auto& v : p.v) {
    if (!out.empty()) out += '_';
    out += v < 0 ? "m" + BigInt(-v).get_str() : v.get_str();
  }
  return out;
}

}  // namespace

SweepSpec parse_sweep_spec(const json& j) {
  SweepSpec s;
  try {
    static constexpr const char* names[] = {"a", "b", "c", "d", "e", "f"};
    const json& r = j.at("ranges");
    for (int i = 0; i < 6; ++i) {
      const json& range = r.at(names[i]);
      if (!range.is_array() || range.size() != 2)
        throw Error(ErrorKind::Usage, std::string("range ") + names[i] + " must be [lo, hi]");
      s.ranges[i] = {range[0].get<std::int64_t>(), range[1].get<std::int64_t>()};
      const auto [lo, hi] = s.ranges[i];
      if (lo > hi || (lo == 0 && hi == 0))
        throw Error(ErrorKind::Usage, std::string("range ") + names[i] + " is empty");
    }
    if (j.contains("filters")) {
      const json& f = j.at("filters");
      s.coprime_only = f.value("coprime_only", false);
      s.sign_normalized_only = f.value("sign_normalized_only", false);
    }
    if (j.contains("limits")) s.limits = j.at("limits").get<EnumLimits>();
    if (j.contains("workers")) s.workers = j.at("workers").get<unsigned>();
    if (s.workers < 1) throw Error(ErrorKind::Usage, "workers must be at least 1");
    if (j.contains("strategy")) s.strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (j.contains("max_degree")) s.max_degree = j.at("max_degree").get<std::size_t>();
    if (j.contains("per_prime")) s.per_prime = j.at("per_prime").get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("sweep spec: ") + e.what());
  }
  return s;
}

std::vector<TriangleParams> sweep_tuples(const SweepSpec& spec) {
  std::vector<TriangleParams> out;
  std::array<std::int64_t, 6> v{};
  auto rec = [&](auto&& self, int i) -> void {
    if (i == 6) {
      TriangleParams p(v[0], v[1], v[2], v[3], v[4], v[5]);
      if (spec.sign_normalized_only && !(p.a() < p.b() && p.c() < p.d() && p.e() < p.f())) return;
      if (spec.coprime_only) {
        for (unsigned k = 0; k < 3; ++k)
          if (gcd(p.first(k), p.second(k)) != 1) return;
      }
      out.push_back(std::move(p));
      return;
    }
    for (std::int64_t x = spec.ranges[i][0]; x <= spec.ranges[i][1]; ++x) {
      if (x == 0) continue;
      v[i] = x;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

json sweep_instance(const TriangleParams& p, const SweepSpec& spec) {
  json result;
  try {
    result["verdict"] = decide(p);
    result["finiteness"] = finiteness_verdict(p);
    try {
      check_quotient_hypotheses(p);
    } catch (const Error& e) {
      result["quotient"] = nullptr;
      result.update(refusal_json(e));
      return result;
    }
    AnalysisOptions o;
    o.limits = spec.limits;
    o.strategy = spec.strategy;
    o.group.max_degree = spec.max_degree;
    o.per_prime = spec.per_prime;
    result["quotient"] = analyze_Q(p, o);
    result["refusal"] = nullptr;
  } catch (const std::exception& e) {
    result["error"] = e.what();
  }
  return result;
}

SweepSummary run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir) {
  const auto tuples = sweep_tuples(spec);
  if (tuples.empty()) throw Error(ErrorKind::Usage, "sweep selects no tuples");
  std::vector<json> reports(tuples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tuples.size();) {
      const auto t0 = Clock::now();
      json result = sweep_instance(tuples[i], spec);
      reports[i] = report_file("sweep", {{"params", format_params(tuples[i])}}, std::move(result),
                               since(t0), spec.limits);
    }
  };
  const unsigned n = std::min<std::size_t>(spec.workers, tuples.size());
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::filesystem::create_directories(out_dir / "reports");
  SweepSummary s;
  s.instances = tuples.size();
  std::ostringstream csv;
  csv << "params,verdict,order,ratio,bound_ok\n";
  std::ofstream jsonl(out_dir / "reports.jsonl");
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const json& rep = reports[i];
    const json& res = rep.at("result");
    jsonl << rep.dump() << '\n';
    std::ofstream(out_dir / "reports" / (file_stem(tuples[i]) + ".json")) << rep.dump(2) << '\n';

    std::string verdict = "error", order, ratio, bound_ok;
    if (res.contains("error")) {
      ++s.errors;
    } else {
      verdict = res.at("verdict").at("outcome").get<std::string>();
      if (verdict == "Developable") ++s.developable;
      if (verdict == "NotDevelopable") ++s.not_developable;
      if (verdict == "Unknown") ++s.unknown;
      if (!res.at("refusal").is_null()) {
        ++s.refused;
        order = "refused";
      } else {
        const QuotientReport q = res.at("quotient").get<QuotientReport>();
        if (!q.complete) {
          ++s.overflowed;
          order = "overflow";
        } else {
          ++s.complete;
          order = q.order.get_str();
          const bool ok = q.bounds && q.bounds->L_divides_order && q.bounds->ratio_divides_M;
          if (!ok) ++s.bound_check_failures;
          bound_ok = ok ? "true" : "false";
          if (q.bounds && q.bounds->ratio) ratio = q.bounds->ratio->get_str();
          for (const auto& c : q.relation_checks)
            if (c.holds && !*c.holds) ++s.relation_check_failures;
          for (const auto& p : q.per_prime) {
            if (!p.criterion_expected) continue;
            if ((p.derived_abelian && !*p.derived_abelian) ||
                (p.sylow_of_derived_abelian && !*p.sylow_of_derived_abelian))
              ++s.p_criterion_violations;
          }
        }
      }
    }
    csv << '"' << format_params(tuples[i]) << "\"," << verdict << ',' << order << ',' << ratio
        << ',' << bound_ok << '\n';
  }
  s.csv = csv.str();
  std::ostringstream text;
  text << "instances " << s.instances << "\nDevelopable " << s.developable << "\nNotDevelopable "
       << s.not_developable << "\nUnknown " << s.unknown << "\ncomplete " << s.complete
       << "\noverflowed " << s.overflowed << "\nrefused " << s.refused << "\nerrors " << s.errors
       << "\nbound_check_failures " << s.bound_check_failures << "\nrelation_check_failures "
       << s.relation_check_failures << "\np_criterion_violations " << s.p_criterion_violations
       << '\n';
  s.text = text.str();
  std::ofstream(out_dir / "summary.csv") << s.csv;
  std::ofstream(out_dir / "summary.txt") << s.text;
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computations on triangles of Baumslag-Solitar groups", "bs_triangle"};
  app.require_subcommand(1);
  Common c;
  std::string params_text;
  unsigned depth = 0;
  std::string prime_text;
  std::string R = "1", S = "1", T = "1";
  std::string spec_path, out_dir;
  unsigned workers = 0;
  bool quotient_flag = false;
  std::string presentation_path;
  int pair = -1;
  std::string by;

  auto params_arg = [&](CLI::App* sub) {
    sub->add_option("params", params_text, "a,b;c,d;e,f")->required();
    sub->add_flag("--json", c.json, "Print a JSON report");
  };

  auto* decide_cmd = app.add_subcommand("decide", "Developability verdict with evidence");
  params_arg(decide_cmd);
  decide_cmd->add_option("--depth", depth, "Power-reduction search depth")
      ->check(CLI::Range(0u, kMaxSearchDepth));

  auto* fin_cmd = app.add_subcommand("finiteness", "Finite, Infinite or Unknown with evidence");
  params_arg(fin_cmd);

  auto* quot_cmd = app.add_subcommand("quotient", "Analyze the finite-order quotient Q or Q_p");
  params_arg(quot_cmd);
  quot_cmd->add_option("--prime", prime_text, "Analyze Q_p instead of Q");
  add_limits(quot_cmd, c);

  auto* sweep_cmd = app.add_subcommand("sweep", "Batch analysis over a parameter grid");
  sweep_cmd->add_option("spec", spec_path, "Sweep spec JSON file")->required();
  sweep_cmd->add_option("out_dir", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--workers", workers, "Worker threads, overriding the sweep file");
  auto* sweep_cosets = sweep_cmd->add_option("--limits-cosets", c.cosets, "Maximum live cosets");
  auto* sweep_secs = sweep_cmd->add_option("--limits-seconds", c.seconds, "Time limit per enumeration");
  auto* sweep_strategy = sweep_cmd->add_option("--strategy", c.strategy, "hlt or felsch")
                             ->check(CLI::IsMember({"hlt", "felsch"}));
  auto* sweep_degree = sweep_cmd->add_option("--max-degree", c.max_degree, "Largest structure degree");

  auto* killer_cmd = app.add_subcommand("killer", "Print the killer relation and verify it in Q");
  params_arg(killer_cmd);
  killer_cmd->add_option("R", R)->required();
  killer_cmd->add_option("S", S)->required();
  killer_cmd->add_option("T", T)->required();
  add_limits(killer_cmd, c);

  auto* canon_cmd = app.add_subcommand("canon", "Canonical form under trivial moves");
  params_arg(canon_cmd);

  auto* ab_cmd = app.add_subcommand("abelianize", "Abelian invariants of G, Q or a presentation");
  ab_cmd->add_option("params", params_text, "a,b;c,d;e,f");
  ab_cmd->add_flag("--json", c.json, "Print a JSON report");
  ab_cmd->add_flag("--quotient", quotient_flag, "Use Q instead of G");
  ab_cmd->add_option("--presentation", presentation_path, "Presentation file");

  auto* bounds_cmd = app.add_subcommand("bounds", "Order exponents N and the bounds L, M");
  params_arg(bounds_cmd);

  auto* reduce_cmd = app.add_subcommand("reduce", "Coprime reduction, or a power reduction");
  params_arg(reduce_cmd);
  reduce_cmd->add_option("--pair", pair, "Pair index for a power reduction")
      ->check(CLI::Range(0, 2));
  reduce_cmd->add_option("--by", by, "Divisor l for a power reduction");

  auto* affine_cmd = app.add_subcommand("affine-check", "Affine model of G(1,-1;1,-1;1,-1)");
  affine_cmd->add_flag("--json", c.json, "Print a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto t0 = Clock::now();
  const json input = {{"params", params_text}};
  auto fail = [&](const Error& e, std::string_view command) {
    const bool refusal = e.kind() != ErrorKind::Parse && e.kind() != ErrorKind::Usage;
    if (c.json) {
      json result = refusal ? refusal_json(e)
                            : json{{"error", {{"kind", std::string(to_string(e.kind()))},
                                              {"message", e.what()}}}};
      emit(out, c, command, input, result, t0);
    } else {
      err << (refusal ? "refused: " : "error: ") << e.what() << '\n';
    }
    return refusal ? kExitRefused : kExitUsage;
  };

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "decide") {
      const TriangleParams p = parse_params(params_text);
      const Verdict v = depth > 0 ? decide_with_reduction_search(p, depth) : decide(p);
      if (c.json) {
        emit(out, c, command, input, v, t0);
      } else {
        out << "params: " << format_params(p) << "\nverdict: " << to_string(v.outcome) << '\n';
        if (v.family) out << "family: " << *v.family << '\n';
        print_evidence(out, v.evidence, v.annotations);
      }
      return exit_code(v.outcome);
    }
    if (command == "finiteness") {
      const TriangleParams p = parse_params(params_text);
      const FinitenessVerdict v = finiteness_verdict(p);
      if (c.json) {
        emit(out, c, command, input, v, t0);
      } else {
        out << "params: " << format_params(p) << "\nfiniteness: " << to_string(v.outcome) << '\n';
        print_evidence(out, v.evidence, v.annotations);
      }
      return kExitOk;
    }
    if (command == "quotient") {
      const TriangleParams p = parse_params(params_text);
      const AnalysisOptions o = c.options();
      const QuotientReport r =
          prime_text.empty() ? analyze_Q(p, o) : analyze_Qp(p, parse_bigint(prime_text), o);
      if (c.json) {
        json in = input;
        if (!prime_text.empty()) in["prime"] = prime_text;
        emit(out, c, command, in, r, t0);
      } else {
        print_quotient(out, r);
      }
      return r.complete ? kExitOk : kExitOverflow;
    }
    if (command == "sweep") {
      std::ifstream in(spec_path);
      if (!in) throw Error(ErrorKind::Usage, "cannot read sweep spec " + spec_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Usage, std::string("sweep spec: ") + e.what());
      }
      SweepSpec spec = parse_sweep_spec(j);
      if (workers > 0) spec.workers = workers;
      if (*sweep_cosets) spec.limits.max_cosets = c.cosets;
      if (*sweep_secs) spec.limits.max_seconds = c.seconds;
      if (*sweep_strategy) spec.strategy = parse_strategy(c.strategy);
      if (*sweep_degree) spec.max_degree = c.max_degree;
      const SweepSummary s = run_sweep(spec, out_dir);
      out << s.text;
      return s.bound_check_failures == 0 && s.relation_check_failures == 0 ? kExitOk : 1;
    }
    if (command == "killer") {
      const TriangleParams p = parse_params(params_text);
      const BigInt r = parse_bigint(R), s = parse_bigint(S), t = parse_bigint(T);
      const KillerRelation k = killer_relation(p, r, s, t);
      const Alphabet abc({"x", "y", "z"});
      json result = {{"R", big_json(r)}, {"S", big_json(s)}, {"T", big_json(t)},
                     {"overflow", k.overflow}};
      std::string relation = "overflow";
      if (!k.overflow) {
        relation = format_word(Word::generator(kX, k.lhs_exponent), abc) + " = " +
                   format_word(k.rhs, abc);
        result["lhs"] = format_word(Word::generator(kX, k.lhs_exponent), abc);
        result["rhs"] = format_word(k.rhs, abc);
      }
      // Verification in Q, when Q is defined and enumerable.
      std::optional<bool> verified;
      std::string note;
      try {
        check_quotient_hypotheses(p);
        const AnalysisOptions o = c.options();
        const auto n = order_exponents(p);
        if (!n[0] || !n[1] || !n[2]) throw Error(ErrorKind::PreconditionViolated, "N overflows");
        const Presentation pres = build_Q(p);
        const QuotientEnumeration qe = enumerate_quotient(pres, *n[0], o);
        if (!qe.complete) {
          note = "enumeration overflowed: " + qe.overflow_reason;
        } else if (!qe.regular) {
          note = "order " + qe.order.get_str() + " too large to evaluate";
        } else {
          const WordEvaluator ev(*qe.regular);
          std::optional<Word> w;
          if (!k.overflow) {
            w = k.relator();
          } else {
            std::array<BigInt, 3> ord;
            for (GenId g = 0; g < 3; ++g) ord[g] = element_order(*qe.regular, Word::generator(g));
            w = killer_relator_mod(p, r, s, t, ord);
          }
          if (w) {
            verified = ev.apply(0, *w) == 0;
            note = "in Q of order " + qe.order.get_str();
          } else {
            note = "exponent overflow";
          }
        }
      } catch (const Error& e) {
        note = std::string("not verified: ") + e.what();
      }
      result["verified_in_Q"] = verified ? json(*verified) : json(nullptr);
      result["note"] = note;
      if (c.json) {
        emit(out, c, command, input, result, t0);
      } else {
        out << relation << '\n' << "verified in Q: " << yes_no(verified);
        if (!note.empty()) out << " (" << note << ")";
        out << '\n';
      }
      return verified.value_or(true) ? kExitOk : 1;
    }
    if (command == "canon") {
      const TriangleParams p = parse_params(params_text);
      const Canonical cn = canonicalize(p);
      const std::size_t size = orbit(p).size();
      if (c.json) {
        emit(out, c, command, input,
             {{"canonical", cn.params}, {"moves", cn.moves}, {"orbit_size", std::to_string(size)}},
             t0);
      } else {
        out << "canonical: " << format_params(cn.params) << "\nmoves: "
            << (cn.moves.empty() ? "none" : format_moves(cn.moves)) << "\norbit size: " << size
            << '\n';
      }
      return kExitOk;
    }
    if (command == "abelianize") {
      Presentation pres;
      json in = input;
      if (!presentation_path.empty()) {
        std::ifstream f(presentation_path);
        if (!f) throw Error(ErrorKind::Usage, "cannot read presentation " + presentation_path);
        std::stringstream ss;
        ss << f.rdbuf();
        pres = parse_presentation(ss.str());
        in = {{"presentation", presentation_path}};
      } else {
        if (params_text.empty()) throw Error(ErrorKind::Usage, "give params or --presentation");
        const TriangleParams p = parse_params(params_text);
        if (quotient_flag) {
          pres = build_Q(p);
        } else {
          pres.alphabet = Alphabet({"x", "y", "z"});
          pres.relators = {conjugation_relator(kX, p.a(), kY, p.b()),
                           conjugation_relator(kY, p.c(), kZ, p.d()),
                           conjugation_relator(kZ, p.e(), kX, p.f())};
        }
        in["group"] = quotient_flag ? "Q" : "G";
      }
      const AbelianInvariants inv = abelianization(pres);
      if (c.json) {
        emit(out, c, command, in,
             {{"invariants", inv}, {"order", inv.order() ? big_json(*inv.order()) : json(nullptr)}},
             t0);
      } else {
        out << format_invariants(inv) << '\n';
      }
      return kExitOk;
    }
    if (command == "bounds") {
      const TriangleParams p = ordered(parse_params(params_text));
      const auto n = order_exponents(p);
      const OrderBounds b = order_bounds(p);
      auto s = [](const std::optional<BigInt>& v) { return v ? v->get_str() : "overflow"; };
      if (c.json) {
        json ns = json::array();
        for (const auto& x : n) ns.push_back(x ? big_json(*x) : json(nullptr));
        emit(out, c, command, input,
             {{"params", p},
              {"order_exponents", ns},
              {"L", b.L ? big_json(*b.L) : json(nullptr)},
              {"M", b.M ? big_json(*b.M) : json(nullptr)}},
             t0);
      } else {
        out << "params: " << format_params(p) << "\nN_x: " << s(n[0]) << "\nN_y: " << s(n[1])
            << "\nN_z: " << s(n[2]) << "\nL: " << s(b.L) << "\nM: " << s(b.M) << '\n';
      }
      return kExitOk;
    }
    if (command == "reduce") {
      const TriangleParams p = parse_params(params_text);
      if (pair >= 0 || !by.empty()) {
        if (pair < 0 || by.empty()) throw Error(ErrorKind::Usage, "--pair and --by go together");
        const auto r = power_reduce(p, static_cast<unsigned>(pair), parse_bigint(by));
        if (c.json) {
          emit(out, c, command, input,
               {{"pair", std::to_string(pair)}, {"by", by},
                {"reduced", r ? json(*r) : json(nullptr)}},
               t0);
        } else {
          out << (r ? format_params(*r) : std::string("overflow")) << '\n';
        }
        return kExitOk;
      }
      const CoprimeReduction cr = coprime_reduce(p);
      TriangleParams coprime;
      coprime.v = cr.coprime;
      if (c.json) {
        emit(out, c, command, input,
             {{"moves", cr.moves},
              {"l", big_json(cr.l)},
              {"m", big_json(cr.m)},
              {"n", big_json(cr.n)},
              {"coprime", coprime},
              {"reduced", cr.reduced ? json(*cr.reduced) : json(nullptr)}},
             t0);
      } else {
        out << "moves: " << (cr.moves.empty() ? "none" : format_moves(cr.moves)) << "\nl,m,n: "
            << cr.l << ',' << cr.m << ',' << cr.n << "\ncoprime: " << format_params(coprime)
            << "\nreduced: " << (cr.reduced ? format_params(*cr.reduced) : "overflow") << '\n';
      }
      return kExitOk;
    }
    if (command == "affine-check") {
      const AffineCheck a = affine_check();
      if (c.json) {
        json tr = json::array();
        for (const auto& t : a.translations)
          tr.push_back({std::to_string(t[0]), std::to_string(t[1]), std::to_string(t[2])});
        emit(out, c, command, json::object(),
             {{"ok", a.ok},
              {"relations", a.relations},
              {"squares_are_translations", a.squares_are_translations},
              {"translations", tr},
              {"lattice_rank", std::to_string(a.lattice_rank)}},
             t0);
      } else {
        static constexpr const char* rel[] = {"y^-1 x y = x^-1", "z^-1 y z = y^-1",
                                              "x^-1 z x = z^-1"};
        for (int g = 0; g < 3; ++g) out << rel[g] << ": " << (a.relations[g] ? "holds" : "FAILS") << '\n';
        for (int g = 0; g < 3; ++g) {
          out << "xyz"[g] << "^2: ";
          if (a.squares_are_translations[g])
            out << "translation by (" << a.translations[g][0] << ',' << a.translations[g][1] << ','
                << a.translations[g][2] << ")\n";
          else
            out << "not a translation\n";
        }
        out << "lattice rank: " << a.lattice_rank << "\nresult: " << (a.ok ? "true" : "false")
            << '\n';
      }
      return a.ok ? kExitOk : 1;
    }
  } catch (const Error& e) {
    return fail(e, command);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace bstri::cli
