#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "report_json.hpp"

namespace bstri::cli {

// Exit codes: verdicts use 0 (Developable), 1 (NotDevelopable), 2 (Unknown).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitRefused = 4;
inline constexpr int kExitOverflow = 5;
inline constexpr int kExitInternal = 6;

int exit_code(Outcome o);

struct SweepSpec {
  // Inclusive ranges for a..f; zero is skipped.
  std::array<std::array<std::int64_t, 2>, 6> ranges{};
  bool coprime_only = false;
  bool sign_normalized_only = false;
  EnumLimits limits;
  unsigned workers = 1;
  Strategy strategy = Strategy::Hlt;
  std::size_t max_degree = GroupLimits{}.max_degree;
  bool per_prime = true;
};

// {"ranges": {"a": [lo, hi], ...}, "filters": {...}, "limits": {...},
//  "workers": n, "strategy": "hlt", "max_degree": n, "per_prime": bool}.
// Throws Error(Usage) on empty ranges or bad fields.
SweepSpec parse_sweep_spec(const json& j);
std::vector<TriangleParams> sweep_tuples(const SweepSpec& spec);

struct SweepSummary {
  std::size_t instances = 0;
  std::size_t developable = 0, not_developable = 0, unknown = 0;
  std::size_t complete = 0, overflowed = 0, refused = 0, errors = 0;
  std::size_t bound_check_failures = 0;
  std::size_t relation_check_failures = 0;
  std::size_t p_criterion_violations = 0;
  std::string csv;   // params,verdict,order,ratio,bound_ok
  std::string text;  // counts, one per line
};

// Report for one sweep tuple: verdict, finiteness and, when the hypotheses
// hold, the quotient analysis.
json sweep_instance(const TriangleParams& p, const SweepSpec& spec);

// Writes reports.jsonl, reports/<tuple>.json, summary.csv and summary.txt.
SweepSummary run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir);

// Whole command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bstri::cli
