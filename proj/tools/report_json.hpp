#pragma once

// JSON forms of library results. Every number is a decimal string; absent
// optionals are null.

#include "json.hpp"

#include "bstri/coset.hpp"
#include "bstri/decide.hpp"
#include "bstri/structure.hpp"
#include "bstri/triangle.hpp"

namespace bstri {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

json big_json(const BigInt& v);
BigInt json_big(const json& j);
json double_json(double v);
double json_double(const json& j);

Move parse_move(std::string_view text);

void to_json(json& j, const TriangleParams& p);
void from_json(const json& j, TriangleParams& p);
void to_json(json& j, const Move& m);
void from_json(const json& j, Move& m);
void to_json(json& j, const EvidenceStep& s);
void from_json(const json& j, EvidenceStep& s);
void to_json(json& j, const Verdict& v);
void from_json(const json& j, Verdict& v);
void to_json(json& j, const FinitenessVerdict& v);
void from_json(const json& j, FinitenessVerdict& v);
void to_json(json& j, const EnumStats& s);
void from_json(const json& j, EnumStats& s);
void to_json(json& j, const AbelianInvariants& a);
void from_json(const json& j, AbelianInvariants& a);
void to_json(json& j, const StructureReport& r);
void from_json(const json& j, StructureReport& r);
void to_json(json& j, const StructureInfo& s);
void from_json(const json& j, StructureInfo& s);
void to_json(json& j, const BoundCheck& b);
void from_json(const json& j, BoundCheck& b);
void to_json(json& j, const RelationCheck& c);
void from_json(const json& j, RelationCheck& c);
void to_json(json& j, const PrimeReport& p);
void from_json(const json& j, PrimeReport& p);
void to_json(json& j, const QuotientReport& r);
void from_json(const json& j, QuotientReport& r);
void to_json(json& j, const EnumLimits& l);
void from_json(const json& j, EnumLimits& l);

// {schema_version, command, input, result, timing, limits}
json report_file(std::string_view command, json input, json result, double seconds,
                 const EnumLimits& limits);

}  // namespace bstri
