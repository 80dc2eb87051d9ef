#include "balaw/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "balaw/exact.hpp"
#include "json.hpp"

namespace balaw {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownEstimates = {
    "kruzkov", "tv_theorem", "tv_special_ck", "stability_theorem"};

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& message) {
  throw std::runtime_error(origin + ": field '" +
                           (path.empty() ? "(root)" : path) + "' " + message);
}

std::string joined(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& member(const json& node, const std::string& origin,
                   const std::string& path, const std::string& key) {
  if (!node.is_object()) fail(origin, path, "must be an object");
  const auto it = node.find(key);
  if (it == node.end()) fail(origin, joined(path, key), "is missing");
  return *it;
}

const json* optional_member(const json& node, const std::string& origin,
                            const std::string& path, const std::string& key) {
  if (!node.is_object()) fail(origin, path, "must be an object");
  const auto it = node.find(key);
  return it == node.end() ? nullptr : &*it;
}

void reject_unknown(const json& node, const std::string& origin,
                    const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!node.is_object()) fail(origin, path, "must be an object");
  for (const auto& [key, value] : node.items()) {
    (void)value;
    if (!allowed.count(key)) {
      fail(origin, joined(path, key), "is not a recognized field");
    }
  }
}

double as_number(const json& node, const std::string& origin,
                 const std::string& path) {
  if (!node.is_number()) fail(origin, path, "must be a number");
  return node.get<double>();
}

long as_integer(const json& node, const std::string& origin,
                const std::string& path) {
  if (!node.is_number_integer()) fail(origin, path, "must be an integer");
  return node.get<long>();
}

std::string as_string(const json& node, const std::string& origin,
                      const std::string& path) {
  if (!node.is_string()) fail(origin, path, "must be a string");
  return node.get<std::string>();
}

Vec as_number_array(const json& node, const std::string& origin,
                    const std::string& path) {
  if (!node.is_array() || node.empty()) {
    fail(origin, path, "must be a nonempty array of numbers");
  }
  Vec values;
  for (const auto& entry : node) {
    if (!entry.is_number()) fail(origin, path, "must contain only numbers");
    values.push_back(entry.get<double>());
  }
  return values;
}

Params parse_params(const json* node, const std::string& origin,
                    const std::string& path) {
  Params params;
  if (node == nullptr) return params;
  if (!node->is_object()) fail(origin, path, "must be an object");
  for (const auto& [key, value] : node->items()) {
    std::vector<double> entry;
    if (value.is_number()) {
      entry.push_back(value.get<double>());
    } else if (value.is_array() && !value.empty()) {
      for (const auto& element : value) {
        if (!element.is_number()) {
          fail(origin, joined(path, key), "must contain only numbers");
        }
        entry.push_back(element.get<double>());
      }
    } else {
      fail(origin, joined(path, key),
           "must be a number or a nonempty array of numbers");
    }
    params[key] = std::move(entry);
  }
  return params;
}

void require_catalog_id(const std::string& id,
                        const std::vector<std::string>& catalog,
                        const std::string& origin, const std::string& path) {
  if (std::find(catalog.begin(), catalog.end(), id) != catalog.end()) return;
  std::string known;
  for (const std::string& entry : catalog) {
    if (!known.empty()) known += ", ";
    known += entry;
  }
  fail(origin, path, "references unknown id '" + id + "' (known: " + known +
                         ")");
}

ModelSpec parse_model(const json& node, const std::string& origin,
                      const std::string& path) {
  reject_unknown(node, origin, path, {"flux", "source"});
  ModelSpec spec;
  const json& flux = member(node, origin, path, "flux");
  const std::string flux_path = joined(path, "flux");
  reject_unknown(flux, origin, flux_path, {"id", "params"});
  spec.flux_id = as_string(member(flux, origin, flux_path, "id"), origin,
                           joined(flux_path, "id"));
  require_catalog_id(spec.flux_id, flux_catalog(), origin,
                     joined(flux_path, "id"));
  spec.flux_params = parse_params(
      optional_member(flux, origin, flux_path, "params"), origin,
      joined(flux_path, "params"));
  if (const json* source = optional_member(node, origin, path, "source")) {
    const std::string source_path = joined(path, "source");
    reject_unknown(*source, origin, source_path, {"id", "params"});
    spec.source_id = as_string(member(*source, origin, source_path, "id"),
                               origin, joined(source_path, "id"));
    require_catalog_id(spec.source_id, source_catalog(), origin,
                       joined(source_path, "id"));
    spec.source_params = parse_params(
        optional_member(*source, origin, source_path, "params"), origin,
        joined(source_path, "params"));
  }
  return spec;
}

InitialSpec parse_initial(const json& node, const std::string& origin,
                          const std::string& path) {
  reject_unknown(node, origin, path, {"id", "params"});
  InitialSpec spec;
  spec.id = as_string(member(node, origin, path, "id"), origin,
                      joined(path, "id"));
  require_catalog_id(spec.id, initial_catalog(), origin, joined(path, "id"));
  spec.params = parse_params(optional_member(node, origin, path, "params"),
                             origin, joined(path, "params"));
  return spec;
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' &&
        c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& error) {
    throw std::runtime_error(origin + ": JSON parse error: " + error.what());
  }
  if (!root.is_object()) {
    throw std::runtime_error(origin + ": the top level must be an object");
  }
  reject_unknown(root, origin, "",
                 {"schema_version", "name", "dimension", "model", "initial",
                  "second_model", "second_initial", "domain", "grid", "solver",
                  "estimates", "resolution_levels", "region", "profile",
                  "tolerance_rel", "tolerance_abs", "debug_rhs_scale",
                  "exact"});

  ScenarioConfig config;
  const long version = as_integer(member(root, origin, "", "schema_version"),
                                  origin, "schema_version");
  if (version != kScenarioSchemaVersion) {
    fail(origin, "schema_version",
         "is unsupported (expected " +
             std::to_string(kScenarioSchemaVersion) + ", got " +
             std::to_string(version) + ")");
  }

  config.name =
      as_string(member(root, origin, "", "name"), origin, "name");
  if (!valid_name(config.name)) {
    fail(origin, "name",
         "must be nonempty and use only letters, digits, '.', '_', '-'");
  }

  const long dimension = as_integer(member(root, origin, "", "dimension"),
                                    origin, "dimension");
  if (dimension < 1 || dimension > 4) {
    fail(origin, "dimension", "must be between 1 and 4");
  }
  config.dimension = static_cast<int>(dimension);

  config.model =
      parse_model(member(root, origin, "", "model"), origin, "model");
  config.initial = parse_initial(member(root, origin, "", "initial"), origin,
                                 "initial");
  if (const json* second = optional_member(root, origin, "", "second_model")) {
    config.second_model = parse_model(*second, origin, "second_model");
  }
  if (const json* second =
          optional_member(root, origin, "", "second_initial")) {
    config.second_initial = parse_initial(*second, origin, "second_initial");
  }

  {
    const json& domain = member(root, origin, "", "domain");
    reject_unknown(domain, origin, "domain", {"lo", "hi"});
    config.domain.lo = as_number_array(member(domain, origin, "domain", "lo"),
                                       origin, "domain.lo");
    config.domain.hi = as_number_array(member(domain, origin, "domain", "hi"),
                                       origin, "domain.hi");
    if (static_cast<int>(config.domain.lo.size()) != config.dimension ||
        static_cast<int>(config.domain.hi.size()) != config.dimension) {
      fail(origin, "domain", "must have one lo/hi pair per dimension");
    }
    for (int d = 0; d < config.dimension; ++d) {
      if (!(config.domain.lo[d] < config.domain.hi[d])) {
        fail(origin, "domain",
             "must have positive extent on axis " + std::to_string(d));
      }
    }
  }

  {
    const json& grid = member(root, origin, "", "grid");
    reject_unknown(grid, origin, "grid", {"cells"});
    const json& cells = member(grid, origin, "grid", "cells");
    if (!cells.is_array() || cells.empty()) {
      fail(origin, "grid.cells", "must be a nonempty array of integers");
    }
    for (const auto& entry : cells) {
      const long count = as_integer(entry, origin, "grid.cells");
      if (count < 3) fail(origin, "grid.cells", "entries must be at least 3");
      config.cells.push_back(count);
    }
    if (config.cells.size() == 1) {
      config.cells.assign(config.dimension, config.cells.front());
    }
    if (static_cast<int>(config.cells.size()) != config.dimension) {
      fail(origin, "grid.cells", "must have one entry per dimension (or one "
                                 "entry broadcast to all axes)");
    }
    const double h0 = config.domain.extent(0) / config.cells[0];
    for (int d = 1; d < config.dimension; ++d) {
      const double hd = config.domain.extent(d) / config.cells[d];
      if (std::abs(hd - h0) > 1e-9 * h0) {
        fail(origin, "grid.cells",
             "must give one uniform spacing across axes (axis " +
                 std::to_string(d) + " disagrees with axis 0)");
      }
    }
  }

  {
    const json& solver = member(root, origin, "", "solver");
    reject_unknown(solver, origin, "solver",
                   {"end_time", "snapshot_count", "snapshot_times", "cfl",
                    "source_integrator", "margin_policy"});
    config.solver.end_time = as_number(
        member(solver, origin, "solver", "end_time"), origin,
        "solver.end_time");
    if (!(config.solver.end_time > 0.0)) {
      fail(origin, "solver.end_time", "must be positive");
    }
    if (const json* count =
            optional_member(solver, origin, "solver", "snapshot_count")) {
      const long snapshots =
          as_integer(*count, origin, "solver.snapshot_count");
      if (snapshots < 1) {
        fail(origin, "solver.snapshot_count", "must be at least 1");
      }
      config.solver.snapshot_count = static_cast<int>(snapshots);
    }
    if (const json* times =
            optional_member(solver, origin, "solver", "snapshot_times")) {
      config.solver.snapshot_times =
          as_number_array(*times, origin, "solver.snapshot_times");
    }
    if (const json* cfl = optional_member(solver, origin, "solver", "cfl")) {
      config.solver.cfl = as_number(*cfl, origin, "solver.cfl");
    }
    if (const json* integrator =
            optional_member(solver, origin, "solver", "source_integrator")) {
      const std::string id =
          as_string(*integrator, origin, "solver.source_integrator");
      if (id == "euler") {
        config.solver.source_integrator = SourceIntegrator::euler;
      } else if (id == "heun") {
        config.solver.source_integrator = SourceIntegrator::heun;
      } else {
        fail(origin, "solver.source_integrator",
             "must be 'euler' or 'heun'");
      }
    }
    if (const json* margin =
            optional_member(solver, origin, "solver", "margin_policy")) {
      reject_unknown(*margin, origin, "solver.margin_policy",
                     {"mode", "safety"});
      if (const json* mode = optional_member(*margin, origin,
                                             "solver.margin_policy", "mode")) {
        const std::string id =
            as_string(*mode, origin, "solver.margin_policy.mode");
        if (id == "pad") {
          config.margin.pad = true;
        } else if (id == "strict") {
          config.margin.pad = false;
        } else {
          fail(origin, "solver.margin_policy.mode",
               "must be 'pad' or 'strict'");
        }
      }
      if (const json* safety = optional_member(
              *margin, origin, "solver.margin_policy", "safety")) {
        config.margin.safety =
            as_number(*safety, origin, "solver.margin_policy.safety");
        if (config.margin.safety < 0.0) {
          fail(origin, "solver.margin_policy.safety",
               "must be nonnegative");
        }
      }
    }
    try {
      config.solver.validate();
    } catch (const std::exception& error) {
      fail(origin, "solver", std::string("is invalid: ") + error.what());
    }
  }

  if (const json* estimates = optional_member(root, origin, "", "estimates")) {
    if (!estimates->is_array()) {
      fail(origin, "estimates", "must be an array of estimate ids");
    }
    for (const auto& entry : *estimates) {
      const std::string id = as_string(entry, origin, "estimates");
      if (id == "stability_simplified") {
        fail(origin, "estimates",
             "lists 'stability_simplified', which is emitted together with "
             "'stability_theorem'; list the latter");
      }
      if (!kKnownEstimates.count(id)) {
        fail(origin, "estimates",
             "contains unknown id '" + id +
                 "' (known: kruzkov, tv_theorem, tv_special_ck, "
                 "stability_theorem)");
      }
      if (std::find(config.estimates.begin(), config.estimates.end(), id) !=
          config.estimates.end()) {
        fail(origin, "estimates", "lists '" + id + "' twice");
      }
      config.estimates.push_back(id);
    }
  }

  if (const json* levels =
          optional_member(root, origin, "", "resolution_levels")) {
    if (!levels->is_array() || levels->empty()) {
      fail(origin, "resolution_levels", "must be a nonempty integer array");
    }
    config.resolution_levels.clear();
    for (const auto& entry : *levels) {
      const long level = as_integer(entry, origin, "resolution_levels");
      if (level < 1) {
        fail(origin, "resolution_levels", "entries must be at least 1");
      }
      if (!config.resolution_levels.empty() &&
          level <= config.resolution_levels.back()) {
        fail(origin, "resolution_levels", "must be strictly increasing");
      }
      config.resolution_levels.push_back(static_cast<int>(level));
    }
  }

  if (const json* region = optional_member(root, origin, "", "region")) {
    reject_unknown(*region, origin, "region", {"center", "radius"});
    Vec center = as_number_array(member(*region, origin, "region", "center"),
                                 origin, "region.center");
    if (static_cast<int>(center.size()) != config.dimension) {
      fail(origin, "region.center", "must have one entry per dimension");
    }
    const double radius = as_number(
        member(*region, origin, "region", "radius"), origin, "region.radius");
    if (!(radius > 0.0)) fail(origin, "region.radius", "must be positive");
    config.region = Region::ball(std::move(center), radius);
  }

  if (const json* profile = optional_member(root, origin, "", "profile")) {
    reject_unknown(*profile, origin, "profile", {"plateau_radius"});
    config.plateau_radius = as_number(
        member(*profile, origin, "profile", "plateau_radius"), origin,
        "profile.plateau_radius");
    if (!(config.plateau_radius > 0.0) || !(config.plateau_radius < 1.0)) {
      fail(origin, "profile.plateau_radius", "must lie in (0, 1)");
    }
  }

  if (const json* tolerance =
          optional_member(root, origin, "", "tolerance_rel")) {
    config.tolerance_rel = as_number(*tolerance, origin, "tolerance_rel");
    if (config.tolerance_rel < 0.0) {
      fail(origin, "tolerance_rel", "must be nonnegative");
    }
  }
  if (const json* tolerance =
          optional_member(root, origin, "", "tolerance_abs")) {
    config.tolerance_abs = as_number(*tolerance, origin, "tolerance_abs");
    if (config.tolerance_abs < 0.0) {
      fail(origin, "tolerance_abs", "must be nonnegative");
    }
  }
  if (const json* scale =
          optional_member(root, origin, "", "debug_rhs_scale")) {
    config.debug_rhs_scale = as_number(*scale, origin, "debug_rhs_scale");
    if (!(config.debug_rhs_scale > 0.0)) {
      fail(origin, "debug_rhs_scale", "must be positive");
    }
  }

  if (const json* exact = optional_member(root, origin, "", "exact")) {
    reject_unknown(*exact, origin, "exact", {"id", "params"});
    config.exact_id = as_string(member(*exact, origin, "exact", "id"), origin,
                                "exact.id");
    require_catalog_id(*config.exact_id, exact_catalog(), origin, "exact.id");
    config.exact_params = parse_params(
        optional_member(*exact, origin, "exact", "params"), origin,
        "exact.params");
  }

  for (const std::string& id : config.estimates) {
    if (id == "kruzkov") {
      if (!config.second_initial.has_value()) {
        fail(origin, "estimates",
             "lists 'kruzkov', which needs 'second_initial'");
      }
      if (config.second_model.has_value()) {
        fail(origin, "estimates",
             "lists 'kruzkov', which compares two solutions of one model; "
             "remove 'second_model'");
      }
    }
    if (id == "stability_theorem") {
      if (!config.second_model.has_value()) {
        fail(origin, "estimates",
             "lists 'stability_theorem', which needs 'second_model'");
      }
      if (!config.region.has_value()) {
        fail(origin, "estimates",
             "lists 'stability_theorem', which needs 'region'");
      }
    }
  }

  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read scenario config " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.filename().string());
}

}  // namespace balaw
