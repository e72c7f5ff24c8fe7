#pragma once

// Suite results and their deterministic JSON / CSV rendering.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace nct {

/// One measured quantity compared against a pinned threshold. `relation` is
/// "<=", ">=", ">" or "==".
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";
  bool pass = false;
};

Check make_check(std::string name, double value, std::string relation, double threshold);

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json data = nlohmann::json::object();
  /// name -> CSV text written next to the report in csv mode.
  std::vector<std::pair<std::string, std::string>> tables;
  std::vector<std::string> warnings;

  bool pass() const;
};

enum class ReportFormat { Json, Csv };

/// %.12e, with inf / -inf / nan spelled out.
std::string format_double(double v);

/// JSON text with sorted keys, two-space indent and %.12e floats.
std::string canonical_json(const nlohmann::json& doc);

/// {"config_hash", "pass", "suites": [...]}.
nlohmann::json report_document(const std::vector<SuiteResult>& results, const std::string& config_hash);

/// Header suite,check,value,relation,threshold,pass.
std::string checks_csv(const std::vector<SuiteResult>& results);

/// Writes the report. CSV mode also writes each table to <stem>.<suite>.<name>.csv.
/// Throws std::invalid_argument for empty results (nothing is written) and
/// std::runtime_error for an unwritable path. An empty path means stdout.
void emit_report(const std::vector<SuiteResult>& results, ReportFormat format, const std::string& path,
                 const std::string& config_hash);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace nct
