#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace balaw {

enum class Verdict { holds, holds_within_tolerance, violated };

std::string verdict_name(Verdict verdict);

/// holds: lhs <= rhs exactly. holds_within_tolerance: lhs exceeds rhs by no
/// more than the relative slack plus the discretization allowance (meant to
/// absorb first-order scheme error, typically 4 h TV(u0)). Otherwise
/// violated.
Verdict judge(double lhs, double rhs, double tolerance_rel, double allowance);

/// One additive contribution to a bound's right-hand side.
struct EstimateTerm {
  std::string id;
  double value = 0.0;
  std::string note;
};

struct GridMeta {
  double h = 0.0;
  int dimension = 0;
  std::vector<std::int64_t> cells;
};

/// Term-by-term account of one inequality check. rhs always equals the sum
/// of the term values; make_report enforces that by construction.
struct EstimateReport {
  std::string estimate_id;
  std::string scenario;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance_rel = 0.0;
  double discretization_allowance = 0.0;
  Verdict verdict = Verdict::violated;
  std::vector<EstimateTerm> terms;
  std::map<std::string, double> coefficients;
  GridMeta grid;
  std::vector<std::string> notes;

  double margin() const { return rhs - lhs; }
};

EstimateReport make_report(std::string estimate_id, double lhs,
                           std::vector<EstimateTerm> terms,
                           std::map<std::string, double> coefficients,
                           double tolerance_rel, double allowance);

/// Stable JSON rendering: fixed key order, no timestamps, 17 significant
/// digits, so byte-identical reruns diff cleanly.
std::string report_to_json(const EstimateReport& report);

void write_report_json(const EstimateReport& report,
                       const std::filesystem::path& path);

EstimateReport report_from_json(const std::string& text);

}  // namespace balaw
