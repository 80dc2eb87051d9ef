#include "balaw/report.hpp"

#include <fstream>
#include <stdexcept>

#include "balaw/kahan.hpp"
#include "balaw/version.hpp"
#include "json.hpp"

namespace balaw {

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::holds:
      return "holds";
    case Verdict::holds_within_tolerance:
      return "holds_within_tolerance";
    case Verdict::violated:
      return "violated";
  }
  throw std::logic_error("unknown verdict");
}

Verdict judge(double lhs, double rhs, double tolerance_rel, double allowance) {
  if (lhs <= rhs) return Verdict::holds;
  if (lhs <= rhs * (1.0 + tolerance_rel) + allowance) {
    return Verdict::holds_within_tolerance;
  }
  return Verdict::violated;
}

EstimateReport make_report(std::string estimate_id, double lhs,
                           std::vector<EstimateTerm> terms,
                           std::map<std::string, double> coefficients,
                           double tolerance_rel, double allowance) {
  EstimateReport report;
  report.estimate_id = std::move(estimate_id);
  report.lhs = lhs;
  report.terms = std::move(terms);
  report.coefficients = std::move(coefficients);
  report.tolerance_rel = tolerance_rel;
  report.discretization_allowance = allowance;
  KahanSum sum;
  for (const EstimateTerm& term : report.terms) sum.add(term.value);
  report.rhs = sum.value();
  report.verdict = judge(report.lhs, report.rhs, tolerance_rel, allowance);
  for (std::size_t i = 0; i < report.terms.size(); ++i) {
    for (std::size_t j = i + 1; j < report.terms.size(); ++j) {
      if (report.terms[i].id == report.terms[j].id) {
        throw std::logic_error("duplicate term id '" + report.terms[i].id +
                               "' in estimate " + report.estimate_id);
      }
    }
  }
  return report;
}

std::string report_to_json(const EstimateReport& report) {
  nlohmann::ordered_json root;
  root["schema_version"] = kSchemaVersion;
  root["estimate_id"] = report.estimate_id;
  root["scenario"] = report.scenario;
  root["verdict"] = verdict_name(report.verdict);
  root["lhs"] = report.lhs;
  root["rhs"] = report.rhs;
  root["margin"] = report.margin();
  root["tolerance_rel"] = report.tolerance_rel;
  root["discretization_allowance"] = report.discretization_allowance;
  root["terms"] = nlohmann::ordered_json::object();
  for (const EstimateTerm& term : report.terms) {
    root["terms"][term.id] = term.value;
  }
  root["coefficients"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.coefficients) {
    root["coefficients"][key] = value;
  }
  root["grid"] = nlohmann::ordered_json::object();
  root["grid"]["h"] = report.grid.h;
  root["grid"]["N"] = report.grid.dimension;
  root["grid"]["cells"] = report.grid.cells;
  nlohmann::ordered_json notes = nlohmann::ordered_json::array();
  for (const EstimateTerm& term : report.terms) {
    if (!term.note.empty()) notes.push_back(term.id + ": " + term.note);
  }
  for (const std::string& note : report.notes) notes.push_back(note);
  root["notes"] = notes;
  return root.dump(2) + "\n";
}

void write_report_json(const EstimateReport& report,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write report to " + path.string());
  }
  out << report_to_json(report);
}

EstimateReport report_from_json(const std::string& text) {
  const nlohmann::json root = nlohmann::json::parse(text);
  if (root.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::runtime_error("unsupported report schema version");
  }
  EstimateReport report;
  report.estimate_id = root.at("estimate_id").get<std::string>();
  report.scenario = root.at("scenario").get<std::string>();
  report.lhs = root.at("lhs").get<double>();
  report.tolerance_rel = root.at("tolerance_rel").get<double>();
  report.discretization_allowance =
      root.at("discretization_allowance").get<double>();
  for (const auto& [id, value] : root.at("terms").items()) {
    EstimateTerm term;
    term.id = id;
    term.value = value.get<double>();
    report.terms.push_back(std::move(term));
  }
  if (root.contains("coefficients")) {
    for (const auto& [key, value] : root.at("coefficients").items()) {
      report.coefficients[key] = value.get<double>();
    }
  }
  if (root.contains("grid")) {
    const auto& grid = root.at("grid");
    report.grid.h = grid.at("h").get<double>();
    report.grid.dimension = grid.at("N").get<int>();
    report.grid.cells = grid.at("cells").get<std::vector<std::int64_t>>();
  }
  if (root.contains("notes")) {
    report.notes = root.at("notes").get<std::vector<std::string>>();
  }
  const std::string verdict = root.at("verdict").get<std::string>();
  report.rhs = root.at("rhs").get<double>();
  for (Verdict candidate : {Verdict::holds, Verdict::holds_within_tolerance,
                            Verdict::violated}) {
    if (verdict_name(candidate) == verdict) {
      report.verdict = candidate;
      return report;
    }
  }
  throw std::runtime_error("unknown verdict '" + verdict + "'");
}

}  // namespace balaw
