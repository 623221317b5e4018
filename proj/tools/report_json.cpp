#include "report_json.hpp"

#include <charconv>

#include "bstri/error.hpp"

namespace bstri {

json big_json(const BigInt& v) { return v.get_str(); }

BigInt json_big(const json& j) {
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
  return parse_bigint(j.get<std::string>());
}

json double_json(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double json_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad number '" + s + "'", static_cast<std::size_t>(ptr - s.data()));
  return v;
}

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json opt_big(const std::optional<BigInt>& v) { return v ? big_json(*v) : json(nullptr); }

std::optional<BigInt> get_opt_big(const json& j) {
  if (j.is_null()) return std::nullopt;
  return json_big(j);
}

template <typename T>
std::optional<T> get_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json big_list(const std::vector<BigInt>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(big_json(x));
  return out;
}

std::vector<BigInt> get_big_list(const json& j) {
  std::vector<BigInt> out;
  for (const auto& x : j) out.push_back(json_big(x));
  return out;
}

json u64(std::uint64_t v) { return std::to_string(v); }
std::uint64_t get_u64(const json& j) { return to_u64(json_big(j)); }

}  // namespace

Move parse_move(std::string_view text) {
  if (text == "CyclicPermute") return {MoveKind::CyclicPermute, 0};
  for (auto [name, kind] : {std::pair{std::string_view("SwapPartners("), MoveKind::SwapPartners},
                            std::pair{std::string_view("NegatePair("), MoveKind::NegatePair}}) {
    if (text.size() == name.size() + 2 && text.substr(0, name.size()) == name &&
        text.back() == ')' && text[name.size()] >= '0' && text[name.size()] <= '2')
      return {kind, static_cast<unsigned>(text[name.size()] - '0')};
  }
  throw ParseError("unknown move '" + std::string(text) + "'", 0);
}

void to_json(json& j, const TriangleParams& p) { j = format_params(p); }
void from_json(const json& j, TriangleParams& p) { p = parse_params(j.get<std::string>()); }
void to_json(json& j, const Move& m) { j = format_move(m); }
void from_json(const json& j, Move& m) { m = parse_move(j.get<std::string>()); }

void to_json(json& j, const EvidenceStep& s) {
  j = {{"rule", s.rule}, {"detail", s.detail}, {"params_after", opt(s.params_after)}};
}
void from_json(const json& j, EvidenceStep& s) {
  s.rule = j.at("rule").get<std::string>();
  s.detail = j.at("detail").get<std::string>();
  s.params_after = get_opt<TriangleParams>(j.at("params_after"));
}

namespace {

Outcome parse_outcome(const std::string& s) {
  for (Outcome o : {Outcome::Developable, Outcome::NotDevelopable, Outcome::Unknown})
    if (to_string(o) == s) return o;
  throw ParseError("unknown outcome '" + s + "'", 0);
}

Finiteness parse_finiteness(const std::string& s) {
  for (Finiteness f : {Finiteness::Finite, Finiteness::Infinite, Finiteness::Unknown})
    if (to_string(f) == s) return f;
  throw ParseError("unknown finiteness '" + s + "'", 0);
}

}  // namespace

void to_json(json& j, const Verdict& v) {
  j = {{"outcome", std::string(to_string(v.outcome))},
       {"family", opt(v.family)},
       {"evidence", v.evidence},
       {"annotations", v.annotations}};
}
void from_json(const json& j, Verdict& v) {
  v.outcome = parse_outcome(j.at("outcome").get<std::string>());
  v.family = get_opt<std::string>(j.at("family"));
  v.evidence = j.at("evidence").get<std::vector<EvidenceStep>>();
  v.annotations = j.at("annotations").get<std::vector<std::string>>();
}

void to_json(json& j, const FinitenessVerdict& v) {
  j = {{"outcome", std::string(to_string(v.outcome))},
       {"evidence", v.evidence},
       {"annotations", v.annotations}};
}
void from_json(const json& j, FinitenessVerdict& v) {
  v.outcome = parse_finiteness(j.at("outcome").get<std::string>());
  v.evidence = j.at("evidence").get<std::vector<EvidenceStep>>();
  v.annotations = j.at("annotations").get<std::vector<std::string>>();
}

void to_json(json& j, const EnumStats& s) {
  j = {{"cosets_defined", u64(s.cosets_defined)},
       {"cosets_collapsed", u64(s.cosets_collapsed)},
       {"deductions", u64(s.deductions)},
       {"lookaheads", u64(s.lookaheads)},
       {"max_active", u64(s.max_active)},
       {"seconds", double_json(s.seconds)}};
}
void from_json(const json& j, EnumStats& s) {
  s.cosets_defined = get_u64(j.at("cosets_defined"));
  s.cosets_collapsed = get_u64(j.at("cosets_collapsed"));
  s.deductions = get_u64(j.at("deductions"));
  s.lookaheads = get_u64(j.at("lookaheads"));
  s.max_active = get_u64(j.at("max_active"));
  s.seconds = json_double(j.at("seconds"));
}

void to_json(json& j, const AbelianInvariants& a) { j = big_list(a.invariant_factors); }
void from_json(const json& j, AbelianInvariants& a) { a.invariant_factors = get_big_list(j); }

void to_json(json& j, const StructureReport& r) {
  json sylows = json::array();
  for (const auto& s : r.derived_sylows)
    sylows.push_back({{"prime", big_json(s.prime)}, {"order", big_json(s.order)}, {"abelian", s.abelian}});
  j = {{"order", big_json(r.order)},
       {"derived_series_orders", big_list(r.derived_series_orders)},
       {"derived_lower_central_orders", big_list(r.derived_lower_central_orders)},
       {"nilpotency_class_of_derived",
        r.nilpotency_class_of_derived ? json(std::to_string(*r.nilpotency_class_of_derived))
                                      : json(nullptr)},
       {"solvable", r.solvable},
       {"is_derived_abelian", r.is_derived_abelian},
       {"second_derived_central_in_derived", r.second_derived_central_in_derived},
       {"second_derived_central_in_whole", r.second_derived_central_in_whole},
       {"derived_sylows", sylows}};
}
void from_json(const json& j, StructureReport& r) {
  r.order = json_big(j.at("order"));
  r.derived_series_orders = get_big_list(j.at("derived_series_orders"));
  r.derived_lower_central_orders = get_big_list(j.at("derived_lower_central_orders"));
  const auto& nc = j.at("nilpotency_class_of_derived");
  r.nilpotency_class_of_derived =
      nc.is_null() ? std::nullopt : std::optional<unsigned>(static_cast<unsigned>(get_u64(nc)));
  r.solvable = j.at("solvable").get<bool>();
  r.is_derived_abelian = j.at("is_derived_abelian").get<bool>();
  r.second_derived_central_in_derived = j.at("second_derived_central_in_derived").get<bool>();
  r.second_derived_central_in_whole = j.at("second_derived_central_in_whole").get<bool>();
  r.derived_sylows.clear();
  for (const auto& s : j.at("derived_sylows"))
    r.derived_sylows.push_back(
        {json_big(s.at("prime")), json_big(s.at("order")), s.at("abelian").get<bool>()});
}

void to_json(json& j, const StructureInfo& s) {
  j = {{"source", s.source},
       {"faithful", s.faithful},
       {"kernel_order", big_json(s.kernel_order)},
       {"report", s.report}};
}
void from_json(const json& j, StructureInfo& s) {
  s.source = j.at("source").get<std::string>();
  s.faithful = j.at("faithful").get<bool>();
  s.kernel_order = json_big(j.at("kernel_order"));
  s.report = j.at("report").get<StructureReport>();
}

void to_json(json& j, const BoundCheck& b) {
  j = {{"L", opt_big(b.L)},
       {"M", opt_big(b.M)},
       {"quotient_ratio", opt_big(b.ratio)},
       {"L_divides_order", b.L_divides_order},
       {"ratio_divides_M", b.ratio_divides_M}};
}
void from_json(const json& j, BoundCheck& b) {
  b.L = get_opt_big(j.at("L"));
  b.M = get_opt_big(j.at("M"));
  b.ratio = get_opt_big(j.at("quotient_ratio"));
  b.L_divides_order = j.at("L_divides_order").get<bool>();
  b.ratio_divides_M = j.at("ratio_divides_M").get<bool>();
}

void to_json(json& j, const RelationCheck& c) {
  j = {{"name", c.name}, {"holds", opt(c.holds)}, {"note", c.note}};
}
void from_json(const json& j, RelationCheck& c) {
  c.name = j.at("name").get<std::string>();
  c.holds = get_opt<bool>(j.at("holds"));
  c.note = j.at("note").get<std::string>();
}

void to_json(json& j, const PrimeReport& p) {
  j = {{"prime", big_json(p.prime)},
       {"complete", p.complete},
       {"order", p.complete ? big_json(p.order) : json(nullptr)},
       {"derived_abelian", opt(p.derived_abelian)},
       {"sylow_of_derived_abelian", opt(p.sylow_of_derived_abelian)},
       {"criterion_expected", p.criterion_expected},
       {"order_divides_Q", opt(p.order_divides_Q)},
       {"structural_order", opt_big(p.structural_order)},
       {"matches_structural", opt(p.matches_structural)},
       {"recipe", "p-part of order exponent"},
       {"note", p.note}};
}
void from_json(const json& j, PrimeReport& p) {
  p.prime = json_big(j.at("prime"));
  p.complete = j.at("complete").get<bool>();
  p.order = p.complete ? json_big(j.at("order")) : BigInt(0);
  p.derived_abelian = get_opt<bool>(j.at("derived_abelian"));
  p.sylow_of_derived_abelian = get_opt<bool>(j.at("sylow_of_derived_abelian"));
  p.criterion_expected = j.at("criterion_expected").get<bool>();
  p.order_divides_Q = get_opt<bool>(j.at("order_divides_Q"));
  p.structural_order = get_opt_big(j.at("structural_order"));
  p.matches_structural = get_opt<bool>(j.at("matches_structural"));
  p.note = j.at("note").get<std::string>();
}

void to_json(json& j, const QuotientReport& r) {
  json orders = nullptr;
  if (r.element_orders) orders = big_list({r.element_orders->begin(), r.element_orders->end()});
  j = {{"input", r.input},
       {"params", r.params},
       {"moves", r.moves},
       {"prime", opt_big(r.prime)},
       {"order_relators", big_list({r.order_relators.begin(), r.order_relators.end()})},
       {"complete", r.complete},
       {"overflow_reason", r.overflow_reason},
       {"method", r.method},
       {"order", r.complete ? big_json(r.order) : json(nullptr)},
       {"stats", r.stats},
       {"element_orders", orders},
       {"abelian_invariants", r.abelian_invariants},
       {"structure", opt(r.structure)},
       {"structure_note", r.structure_note},
       {"bound_check", opt(r.bounds)},
       {"per_prime", r.per_prime},
       {"relation_checks", r.relation_checks},
       {"seconds", double_json(r.seconds)}};
  if (r.prime) j["recipe"] = "p-part of order exponent";
}
void from_json(const json& j, QuotientReport& r) {
  r.input = j.at("input").get<TriangleParams>();
  r.params = j.at("params").get<TriangleParams>();
  r.moves = j.at("moves").get<MoveSequence>();
  r.prime = get_opt_big(j.at("prime"));
  const auto rel = get_big_list(j.at("order_relators"));
  if (rel.size() != 3) throw ParseError("order_relators needs three entries", 0);
  std::copy(rel.begin(), rel.end(), r.order_relators.begin());
  r.complete = j.at("complete").get<bool>();
  r.overflow_reason = j.at("overflow_reason").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.order = r.complete ? json_big(j.at("order")) : BigInt(0);
  r.stats = j.at("stats").get<EnumStats>();
  r.element_orders.reset();
  if (!j.at("element_orders").is_null()) {
    const auto eo = get_big_list(j.at("element_orders"));
    if (eo.size() != 3) throw ParseError("element_orders needs three entries", 0);
    r.element_orders = std::array<BigInt, 3>{eo[0], eo[1], eo[2]};
  }
  r.abelian_invariants = j.at("abelian_invariants").get<AbelianInvariants>();
  r.structure = get_opt<StructureInfo>(j.at("structure"));
  r.structure_note = j.at("structure_note").get<std::string>();
  r.bounds = get_opt<BoundCheck>(j.at("bound_check"));
  r.per_prime = j.at("per_prime").get<std::vector<PrimeReport>>();
  r.relation_checks = j.at("relation_checks").get<std::vector<RelationCheck>>();
  r.seconds = json_double(j.at("seconds"));
}

void to_json(json& j, const EnumLimits& l) {
  j = {{"max_cosets", u64(l.max_cosets)}, {"max_seconds", double_json(l.max_seconds)}};
}
void from_json(const json& j, EnumLimits& l) {
  if (j.contains("max_cosets")) l.max_cosets = get_u64(j.at("max_cosets"));
  if (j.contains("max_seconds")) l.max_seconds = json_double(j.at("max_seconds"));
}

json report_file(std::string_view command, json input, json result, double seconds,
                 const EnumLimits& limits) {
  return {{"schema_version", kSchemaVersion},
          {"command", std::string(command)},
          {"input", std::move(input)},
          {"result", std::move(result)},
          {"timing", {{"seconds", double_json(seconds)}}},
          {"limits", limits}};
}

}  // namespace bstri
