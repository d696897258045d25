#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace haarshift {

/// Options applied on top of a scenario document (CLI flags).
struct RunOptions {
  /// Replaces the scenario's base seed when set; echoed in the report.
  std::optional<std::uint64_t> seed_override;
  /// Replaces the scenario's worker count when set. Never affects report
  /// content, only wall time.
  std::optional<int> jobs_override;
  /// Adds a wall-time field to the report. Off by default so reports stay
  /// byte-deterministic.
  bool include_timing = false;
};

struct RunResult {
  /// 0 = every checked assertion holds, 1 = a checked property failed (the
  /// report carries a witness), 2 = invalid input or a hypothesis guard
  /// fired (the report carries a diagnostic with the offending field path).
  int exit_code = 0;
  /// The serialized report document (structured text, stable key order,
  /// rationals as "p/q" strings).
  std::string report;
};

/// Parses, validates and executes one scenario document, returning the
/// report. Never throws on bad input; malformed documents yield exit code 2
/// with a diagnostic report.
RunResult run_scenario(const std::string& scenario_text, const RunOptions& options = {});

/// Names of the built-in scenarios, in catalog order.
std::vector<std::string> preset_names();

/// The scenario document for a built-in, ready for run_scenario. Throws
/// std::out_of_range for unknown names.
std::string preset_scenario(const std::string& name);

}  // namespace haarshift
