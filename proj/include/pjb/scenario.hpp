#pragma once

// Scenario files: a JSON description of an ambient space, named subspaces and a list of
// actions. Running one yields a JSON report whose bytes depend only on the scenario,
// the seed and the tolerance overrides.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace pjb {

inline constexpr int report_schema_version = 1;
/// Tolerance overrides below this are rejected.
inline constexpr double min_tolerance = 1e-12;

struct RunOptions {
  std::optional<std::uint64_t> seed;
  /// name -> value, applied after the scenario's own "tolerances".
  std::map<std::string, double> tolerances;
  /// Actions evaluated concurrently; the report is assembled in declaration order.
  int jobs = 1;
};

struct RunResult {
  std::string report;   // JSON text, newline-terminated
  std::string summary;  // one human-readable line per action, with timings
  int exit_code = 0;    // 0 all verdicts pass, 1 otherwise
};

/// Default verdict thresholds by name.
const std::map<std::string, double>& default_tolerances();

/// Parse and run a scenario. Throws pjb::error(parse_error) with a line or field path
/// for malformed input; module failures become error records inside the report.
RunResult run_scenario(const std::string& text, const RunOptions& opts = {});

/// Read the file and run it. Throws parse_error if the file cannot be read.
RunResult run_scenario_file(const std::string& path, const RunOptions& opts = {});

}  // namespace pjb
