#pragma once

// JSON system files and report files.
//
// System file:
//   {"d": 4, "A": [[...], ...], "B": [[...], ...],
//    "u_model": {"type": "unbounded"} | {"type": "set", "values": [...]}
//             | {"type": "interval", "lo": a, "hi": b},
//    "seed": 42, "budget": {"words_per_seed": 400, ...}}
// "u_model", "seed" and "budget" are optional.

#include <json.hpp>

#include <string>
#include <vector>

#include "conelab/verdict.hpp"

namespace conelab {

inline constexpr const char* kToolVersion = "0.3.0";

/// Malformed input file; the message names the offending field.
class InputError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

struct SystemFile {
  SystemSpec spec;
  SearchBudget budget;
};

/// Parses and validates a system file. Throws InputError.
SystemFile parse_system_file(const std::string& text);
SystemFile load_system_file(const std::string& path);

nlohmann::json system_to_json(const SystemSpec& spec);
nlohmann::json budget_to_json(const SearchBudget& budget);
SearchBudget budget_from_json(const nlohmann::json& j, SearchBudget base = {});

nlohmann::json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

struct Timing {
  double total_seconds = 0.0;
  std::vector<double> per_k_seconds;
};

/// Report file: tool name and version, the report and, when given, timing.
nlohmann::json make_report_file(const AnalysisReport& report, const Timing* timing);

struct VerificationItem {
  std::string what;
  bool ok = false;
};

/// Re-checks every certificate in a report file against the embedded system
/// and the report's status/verdict rules.
std::vector<VerificationItem> verify_report_file(const nlohmann::json& file);

}  // namespace conelab
