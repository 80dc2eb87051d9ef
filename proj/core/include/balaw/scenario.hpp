#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "balaw/catalog.hpp"
#include "balaw/geometry.hpp"
#include "balaw/solver.hpp"

namespace balaw {

inline constexpr int kScenarioSchemaVersion = 1;

/// What to do when the initial support plus the propagation reach c T +
/// safety does not fit in the declared domain: grow the domain by whole
/// cells (pad) or refuse (strict). Negative safety means two cells.
struct MarginPolicy {
  bool pad = true;
  double safety = -1.0;
};

struct ModelSpec {
  std::string flux_id;
  Params flux_params;
  std::string source_id = "none";
  Params source_params;
};

struct InitialSpec {
  std::string id;
  Params params;
};

/// One declarative experiment: a balance law (optionally two, for the
/// two-solution estimates), initial data, a grid, solver settings, and the
/// estimates to check. Parsed from a versioned JSON file.
struct ScenarioConfig {
  std::string name;
  int dimension = 1;
  ModelSpec model;
  InitialSpec initial;
  /// Second lane: a different model (stability) and/or different initial
  /// data (L1 expansion); absent pieces inherit the first lane's.
  std::optional<ModelSpec> second_model;
  std::optional<InitialSpec> second_initial;

  Box domain;
  std::vector<std::int64_t> cells;
  SolverConfig solver;
  MarginPolicy margin;

  /// Estimate ids to evaluate, in order. Recognized: kruzkov, tv_theorem,
  /// tv_special_ck, stability_theorem (which also emits the simplified
  /// variant).
  std::vector<std::string> estimates;
  /// Per-axis cell multipliers; every estimate runs at every level.
  std::vector<int> resolution_levels{1, 2};

  /// Ball for the stability lhs and its enlarged companions.
  std::optional<Region> region;
  /// Plateau radius of the mollifier profile behind the special-case factor.
  double plateau_radius = 0.5;

  double tolerance_rel = 1e-3;
  /// Negative: the per-estimate default 4 h TV(u0).
  double tolerance_abs = -1.0;
  /// Debug knob: scales every right-hand-side term, for exercising the
  /// violated-verdict path with an intentionally wrong coefficient.
  double debug_rhs_scale = 1.0;

  /// Closed-form reference for convergence reports.
  std::optional<std::string> exact_id;
  Params exact_params;

  bool has_second_lane() const {
    return second_model.has_value() || second_initial.has_value();
  }
};

/// Parses and validates a scenario; `origin` names the source in errors.
ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin);

ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace balaw
