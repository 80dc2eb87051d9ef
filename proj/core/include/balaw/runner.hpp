#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "balaw/report.hpp"
#include "balaw/scenario.hpp"

namespace balaw {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  /// Multiplies every per-axis cell count (on top of resolution levels).
  double resolution_scale = 1.0;
  /// Parallelism across scenarios in a suite; within a scenario everything
  /// is sequential and deterministic.
  int jobs = 1;
  /// Negative: keep the scenario's own settings.
  double tolerance_rel = -1.0;
  double tolerance_abs = -1.0;
  bool write_snapshots = true;
};

/// One estimate evaluation at one resolution level, flattened for tables.
struct EstimateRow {
  std::string scenario;
  std::string estimate;
  int level = 1;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::violated;
  std::map<std::string, double> coefficients;
};

struct ScenarioOutcome {
  std::string name;
  bool failed = false;
  std::string error;
  std::vector<EstimateRow> rows;

  /// 1 when the scenario failed outright or some estimate came back
  /// violated at every configured resolution level; 0 otherwise.
  int exit_code() const;
};

/// Solves every configured resolution level, evaluates the selected
/// estimates, and writes per-level artifacts (reports, snapshot dumps,
/// diagnostics) plus a per-scenario summary table under
/// out_dir/<scenario name>/.
ScenarioOutcome run_scenario(const ScenarioConfig& config,
                             const RunOptions& options);

struct SuiteOutcome {
  std::vector<ScenarioOutcome> scenarios;
  std::filesystem::path summary_path;
  std::filesystem::path coefficients_path;

  /// 1 when any scenario's exit code is nonzero; 0 otherwise (an empty
  /// suite is a warning, not a failure).
  int exit_code() const;
};

/// Runs every *.json scenario in the directory (sorted by filename), up to
/// `jobs` at a time, isolating per-scenario failures. Writes the aggregate
/// summary and the coefficient comparison table (sharp rates next to their
/// legacy counterparts) under out_dir.
SuiteOutcome run_suite(const std::filesystem::path& directory,
                       const RunOptions& options);

struct ConvergenceEntry {
  int level = 1;
  std::int64_t cells_per_axis = 0;
  double spacing = 0.0;
  bool has_error = false;
  double l1_error = 0.0;
  bool has_order = false;
  /// Pairwise observed order against the previous level.
  double observed_order = 0.0;
  std::vector<EstimateRow> rows;
};

struct ConvergenceOutcome {
  std::vector<ConvergenceEntry> levels;
  bool has_overall_order = false;
  /// Least-squares slope of log error against log spacing.
  double overall_order = 0.0;
  std::filesystem::path table_path;
};

/// Re-runs the scenario on `level_count` dyadic refinements of its base
/// grid, measuring the error against the configured reference solution
/// (when present) and re-evaluating every estimate margin. Needs at least
/// three levels to claim a trend.
ConvergenceOutcome convergence_report(const ScenarioConfig& config,
                                      int level_count,
                                      const RunOptions& options);

}  // namespace balaw
