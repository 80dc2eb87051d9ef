#include "balaw/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

#include "balaw/catalog.hpp"
#include "balaw/coefficients.hpp"
#include "balaw/csv.hpp"
#include "balaw/estimates.hpp"
#include "balaw/exact.hpp"
#include "balaw/field_io.hpp"
#include "balaw/functionals.hpp"
#include "balaw/hypotheses.hpp"
#include "balaw/range_track.hpp"
#include "balaw/version.hpp"
#include "json.hpp"

namespace balaw {
namespace {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

using InitialFn = std::function<double(std::span<const double>)>;

/// Everything a scenario shares across resolution levels: built models and
/// data, the propagation reach for domain padding, and the estimate knobs.
struct ScenarioContext {
  ModelPtr model;
  ModelPtr other;
  InitialFn initial;
  InitialFn second_initial;
  bool pair = false;
  double reach = 0.0;
  SupportBox support;
  EstimateOptions estimate_options;
};

ScenarioContext build_context(const ScenarioConfig& config,
                              const RunOptions& options) {
  ScenarioContext ctx;
  ctx.model = make_model(config.dimension, config.model.flux_id,
                         config.model.flux_params, config.model.source_id,
                         config.model.source_params);
  if (config.second_model) {
    ctx.other = make_model(config.dimension, config.second_model->flux_id,
                           config.second_model->flux_params,
                           config.second_model->source_id,
                           config.second_model->source_params);
  }
  ctx.initial = make_initial_data(config.dimension, config.initial.id,
                                  config.initial.params);
  if (config.second_initial) {
    ctx.second_initial = make_initial_data(
        config.dimension, config.second_initial->id,
        config.second_initial->params);
  }
  ctx.pair = config.has_second_lane();

  ctx.estimate_options.tolerance_rel = options.tolerance_rel >= 0.0
                                           ? options.tolerance_rel
                                           : config.tolerance_rel;
  ctx.estimate_options.discretization_allowance =
      options.tolerance_abs >= 0.0 ? options.tolerance_abs
                                   : config.tolerance_abs;

  // Support and value bound of the data, sampled at the base resolution.
  const GridPtr base = make_grid(config.domain, config.cells);
  const ScalarField first_data = ScalarField::sample(base, ctx.initial);
  double bound = first_data.max_abs();
  ctx.support = support_box(first_data, 1e-12 * bound);
  if (ctx.pair) {
    const ScalarField second_data = ScalarField::sample(
        base, ctx.second_initial ? ctx.second_initial : ctx.initial);
    bound = std::max(bound, second_data.max_abs());
    ctx.support.merge(support_box(second_data, 1e-12 * second_data.max_abs()));
  }

  // Propagation reach, two passes: grow the value bound at the source rate,
  // then read off the speed over the grown slab.
  const double end_time = config.solver.end_time;
  DomainSlab crude{0.0, end_time, config.domain, bound};
  double source_rate =
      sup_over_slab(source_u_magnitude(ctx.model), crude, {}).value;
  if (ctx.other) {
    source_rate = std::max(
        source_rate,
        sup_over_slab(source_u_magnitude(ctx.other), crude, {}).value);
  }
  DomainSlab grown{0.0, end_time, config.domain,
                   bound * std::exp(source_rate * end_time) * 1.05};
  double speed = sup_over_slab(flux_u_magnitude(ctx.model), grown, {}).value;
  if (ctx.other) {
    speed = std::max(
        speed, sup_over_slab(flux_u_magnitude(ctx.other), grown, {}).value);
  }
  ctx.reach = speed * end_time;
  return ctx;
}

std::vector<std::int64_t> scaled_cells(const ScenarioConfig& config,
                                       int multiplier, double scale) {
  std::vector<std::int64_t> cells;
  for (const std::int64_t base : config.cells) {
    const std::int64_t scaled = std::llround(
        static_cast<double>(base) * static_cast<double>(multiplier) * scale);
    cells.push_back(std::max<std::int64_t>(scaled, 3));
  }
  return cells;
}

/// Realizes the margin policy: the support dilated by reach + safety must
/// fit, growing the box by whole cells when padding is allowed.
GridPtr build_grid(const ScenarioConfig& config, const ScenarioContext& ctx,
                   const std::vector<std::int64_t>& cells) {
  const double h =
      config.domain.extent(0) / static_cast<double>(cells[0]);
  const double safety =
      config.margin.safety < 0.0 ? 2.0 * h : config.margin.safety;
  Box box = config.domain;
  std::vector<std::int64_t> counts = cells;
  if (!ctx.support.is_empty) {
    const SupportBox needed = ctx.support.dilated(ctx.reach + safety);
    for (int d = 0; d < config.dimension; ++d) {
      std::int64_t pad_lo = 0;
      std::int64_t pad_hi = 0;
      if (needed.lo[d] < box.lo[d]) {
        pad_lo = static_cast<std::int64_t>(
            std::ceil((box.lo[d] - needed.lo[d]) / h - 1e-9));
      }
      if (needed.hi[d] > box.hi[d]) {
        pad_hi = static_cast<std::int64_t>(
            std::ceil((needed.hi[d] - box.hi[d]) / h - 1e-9));
      }
      if ((pad_lo > 0 || pad_hi > 0) && !config.margin.pad) {
        throw std::runtime_error(
            "scenario " + config.name +
            ": domain too small for the propagation reach on axis " +
            std::to_string(d) + " (missing " +
            format_double((pad_lo + pad_hi) * h) +
            " of length); enlarge it or set margin_policy mode to 'pad'");
      }
      box.lo[d] -= static_cast<double>(pad_lo) * h;
      box.hi[d] += static_cast<double>(pad_hi) * h;
      counts[d] += pad_lo + pad_hi;
    }
  }
  return make_grid(box, counts);
}

EstimateReport apply_debug_scale(EstimateReport report, double scale) {
  std::vector<EstimateTerm> terms = std::move(report.terms);
  for (EstimateTerm& term : terms) term.value *= scale;
  EstimateReport scaled = make_report(
      report.estimate_id, report.lhs, std::move(terms),
      std::move(report.coefficients), report.tolerance_rel,
      report.discretization_allowance);
  scaled.scenario = std::move(report.scenario);
  scaled.grid = std::move(report.grid);
  scaled.notes = std::move(report.notes);
  scaled.notes.push_back("debug: every right-hand-side term scaled by " +
                         format_double(scale));
  return scaled;
}

struct LevelResult {
  GridPtr grid;
  Trajectory first;
  std::optional<Trajectory> second;
  std::vector<EstimateReport> reports;
};

LevelResult run_level(const ScenarioConfig& config, const ScenarioContext& ctx,
                      const std::vector<std::int64_t>& cells) {
  LevelResult level;
  level.grid = build_grid(config, ctx, cells);
  const ScalarField first_data = ScalarField::sample(level.grid, ctx.initial);
  if (ctx.pair) {
    const ScalarField second_data = ScalarField::sample(
        level.grid, ctx.second_initial ? ctx.second_initial : ctx.initial);
    const ModelPtr& second_model = ctx.other ? ctx.other : ctx.model;
    PairTrajectories pair = solve_pair(ctx.model, first_data, second_model,
                                       second_data, config.solver);
    level.first = std::move(pair.first);
    level.second = std::move(pair.second);
  } else {
    level.first = solve(ctx.model, first_data, config.solver);
  }

  for (const std::string& id : config.estimates) {
    if ((id == "kruzkov" || id == "stability_theorem") && !level.second) {
      throw std::logic_error("estimate '" + id + "' needs a second lane");
    }
    if (id == "kruzkov") {
      level.reports.push_back(check_kruzkov(ctx.model, level.first,
                                            *level.second,
                                            ctx.estimate_options));
    } else if (id == "tv_theorem") {
      level.reports.push_back(
          check_tv_theorem(ctx.model, level.first, ctx.estimate_options));
    } else if (id == "tv_special_ck") {
      const MollifierProfile profile =
          MollifierProfile::build(config.plateau_radius, config.dimension);
      level.reports.push_back(check_tv_special_case(
          ctx.model, level.first, profile, ctx.estimate_options));
    } else if (id == "stability_theorem") {
      PairTrajectories pair{level.first, *level.second};
      StabilityReports stability = check_stability_theorem(
          ctx.model, ctx.other, pair, *config.region, ctx.estimate_options);
      level.reports.push_back(std::move(stability.sharp));
      level.reports.push_back(std::move(stability.simplified));
    }
  }
  for (EstimateReport& report : level.reports) {
    report.scenario = config.name;
    if (config.debug_rhs_scale != 1.0) {
      report = apply_debug_scale(std::move(report), config.debug_rhs_scale);
    }
  }
  return level;
}

void write_diagnostics_csv(const fs::path& path,
                           const SolverDiagnostics& diagnostics) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write diagnostics to " + path.string());
  }
  out << "step,dt,speed\n";
  for (std::size_t i = 0; i < diagnostics.dt_history.size(); ++i) {
    const std::string fields[] = {std::to_string(i + 1),
                                  format_double(diagnostics.dt_history[i]),
                                  format_double(diagnostics.speed_history[i])};
    out << csv_row(fields);
  }
}

void write_level_artifacts(const LevelResult& level, const fs::path& dir,
                           const RunOptions& options) {
  fs::create_directories(dir);
  for (const EstimateReport& report : level.reports) {
    write_report_json(report, dir / (report.estimate_id + ".json"));
  }
  if (options.write_snapshots) {
    write_field_csv((dir / "u_initial.csv").string(),
                    level.first.snapshots.front(), level.first.times.front());
    write_field_csv((dir / "u_final.csv").string(),
                    level.first.snapshots.back(), level.first.times.back());
    if (level.second) {
      write_field_csv((dir / "v_initial.csv").string(),
                      level.second->snapshots.front(),
                      level.second->times.front());
      write_field_csv((dir / "v_final.csv").string(),
                      level.second->snapshots.back(),
                      level.second->times.back());
    }
  }
  write_diagnostics_csv(dir / "diagnostics.csv", level.first.diagnostics);
}

void write_hypotheses_json(const ScenarioConfig& config,
                           const ScenarioContext& ctx,
                           const LevelResult& level, const fs::path& dir) {
  const RangeHistory history =
      track_range(level.first.times, level.first.snapshots);
  const Box space = history.global_support.is_empty
                        ? level.grid->domain()
                        : history.global_support.as_box();
  const HypothesisReport hypotheses = check_hypotheses(
      ctx.model, solution_slab(history, space), level.first.snapshots.front());

  nlohmann::ordered_json root;
  root["schema_version"] = kSchemaVersion;
  root["scenario"] = config.name;
  root["all_satisfied"] = hypotheses.all_satisfied();
  root["checks"] = nlohmann::ordered_json::array();
  for (const HypothesisCheck& check : hypotheses.checks) {
    nlohmann::ordered_json entry;
    entry["id"] = check.id;
    entry["satisfied"] = check.satisfied;
    entry["measure"] = check.measure;
    entry["note"] = check.note;
    root["checks"].push_back(entry);
  }
  std::ofstream out(dir / "hypotheses.json");
  if (!out) {
    throw std::runtime_error("cannot write hypotheses report under " +
                             dir.string());
  }
  out << root.dump(2) << "\n";
}

EstimateRow to_row(const std::string& scenario, const EstimateReport& report,
                   int multiplier) {
  EstimateRow row;
  row.scenario = scenario;
  row.estimate = report.estimate_id;
  row.level = multiplier;
  row.lhs = report.lhs;
  row.rhs = report.rhs;
  row.margin = report.margin();
  row.verdict = report.verdict;
  row.coefficients = report.coefficients;
  return row;
}

void write_rows(std::ofstream& out, const std::vector<EstimateRow>& rows) {
  for (const EstimateRow& row : rows) {
    const std::string fields[] = {row.scenario,
                                  row.estimate,
                                  format_double(row.lhs),
                                  format_double(row.rhs),
                                  format_double(row.margin),
                                  verdict_name(row.verdict),
                                  std::to_string(row.level)};
    out << csv_row(fields);
  }
}

constexpr const char* kSummaryHeader =
    "scenario,estimate,lhs,rhs,margin,verdict,level\n";

}  // namespace

int ScenarioOutcome::exit_code() const {
  if (failed) return 1;
  std::map<std::string, bool> violated_everywhere;
  for (const EstimateRow& row : rows) {
    const bool violated = row.verdict == Verdict::violated;
    const auto [it, inserted] =
        violated_everywhere.try_emplace(row.estimate, violated);
    if (!inserted) it->second = it->second && violated;
  }
  for (const auto& [estimate, violated] : violated_everywhere) {
    if (violated) return 1;
  }
  return 0;
}

ScenarioOutcome run_scenario(const ScenarioConfig& config,
                             const RunOptions& options) {
  ScenarioOutcome outcome;
  outcome.name = config.name;
  const ScenarioContext ctx = build_context(config, options);
  const fs::path scenario_dir = options.out_dir / config.name;
  fs::create_directories(scenario_dir);

  bool first_level = true;
  for (const int multiplier : config.resolution_levels) {
    const std::vector<std::int64_t> cells =
        scaled_cells(config, multiplier, options.resolution_scale);
    const LevelResult level = run_level(config, ctx, cells);
    const fs::path level_dir =
        scenario_dir / ("L" + std::to_string(multiplier));
    write_level_artifacts(level, level_dir, options);
    if (first_level) {
      write_hypotheses_json(config, ctx, level, level_dir);
      first_level = false;
    }
    for (const EstimateReport& report : level.reports) {
      outcome.rows.push_back(to_row(config.name, report, multiplier));
    }
  }

  std::ofstream summary(scenario_dir / "summary.csv");
  if (!summary) {
    throw std::runtime_error("cannot write summary under " +
                             scenario_dir.string());
  }
  summary << kSummaryHeader;
  write_rows(summary, outcome.rows);
  return outcome;
}

int SuiteOutcome::exit_code() const {
  for (const ScenarioOutcome& outcome : scenarios) {
    if (outcome.exit_code() != 0) return 1;
  }
  return 0;
}

SuiteOutcome run_suite(const std::filesystem::path& directory,
                       const RunOptions& options) {
  if (!fs::is_directory(directory)) {
    throw std::runtime_error("scenario directory " + directory.string() +
                             " does not exist");
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());

  struct Task {
    std::optional<ScenarioConfig> config;
    ScenarioOutcome outcome;
  };
  std::vector<Task> tasks(paths.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    try {
      ScenarioConfig config = load_scenario(paths[i]);
      if (!names.insert(config.name).second) {
        tasks[i].outcome.name = config.name;
        tasks[i].outcome.failed = true;
        tasks[i].outcome.error = "duplicate scenario name in " +
                                 paths[i].filename().string();
      } else {
        tasks[i].outcome.name = config.name;
        tasks[i].config = std::move(config);
      }
    } catch (const std::exception& error) {
      tasks[i].outcome.name = paths[i].stem().string();
      tasks[i].outcome.failed = true;
      tasks[i].outcome.error = error.what();
    }
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&tasks, &next, &options] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      Task& task = tasks[i];
      if (!task.config) continue;
      try {
        task.outcome = run_scenario(*task.config, options);
      } catch (const std::exception& error) {
        task.outcome = ScenarioOutcome{};
        task.outcome.name = task.config->name;
        task.outcome.failed = true;
        task.outcome.error = error.what();
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int spawn = std::min<int>(jobs, static_cast<int>(tasks.size()));
    pool.reserve(spawn);
    for (int j = 0; j < spawn; ++j) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();
  }

  SuiteOutcome suite;
  for (Task& task : tasks) suite.scenarios.push_back(std::move(task.outcome));

  fs::create_directories(options.out_dir);
  suite.summary_path = options.out_dir / "summary.csv";
  suite.coefficients_path = options.out_dir / "coefficients.csv";

  std::ofstream summary(suite.summary_path);
  if (!summary) {
    throw std::runtime_error("cannot write " + suite.summary_path.string());
  }
  summary << "# generated " << utc_timestamp() << "\n" << kSummaryHeader;
  for (const ScenarioOutcome& outcome : suite.scenarios) {
    if (outcome.failed) {
      const std::string fields[] = {outcome.name, "error", "", "",
                                    "",           "error", ""};
      summary << csv_row(fields);
    } else {
      write_rows(summary, outcome.rows);
    }
  }

  std::ofstream comparison(suite.coefficients_path);
  if (!comparison) {
    throw std::runtime_error("cannot write " +
                             suite.coefficients_path.string());
  }
  comparison << "# generated " << utc_timestamp() << "\n"
             << "scenario,estimate,level,tv_rate,legacy_tv_rate,"
                "tv_rate_ratio,dimension_weight,stability_rate,"
                "legacy_stability_rate\n";
  const auto lookup = [](const std::map<std::string, double>& map,
                         const char* key) -> std::optional<double> {
    const auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    return it->second;
  };
  const auto cell = [](const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
  };
  for (const ScenarioOutcome& outcome : suite.scenarios) {
    if (outcome.failed) continue;
    for (const EstimateRow& row : outcome.rows) {
      const auto tv_rate = lookup(row.coefficients, "tv_growth_rate");
      const auto legacy_tv =
          lookup(row.coefficients, "legacy_tv_growth_rate");
      const auto stability_rate =
          lookup(row.coefficients, "source_growth_rate");
      const auto legacy_stability =
          lookup(row.coefficients, "legacy_stability_rate");
      if (!tv_rate && !stability_rate) continue;
      std::optional<double> ratio;
      if (tv_rate && legacy_tv && *tv_rate > 0.0) {
        ratio = *legacy_tv / *tv_rate;
      }
      const std::string fields[] = {
          row.scenario,
          row.estimate,
          std::to_string(row.level),
          cell(tv_rate),
          cell(legacy_tv),
          cell(ratio),
          cell(lookup(row.coefficients, "dimension_weight")),
          cell(stability_rate),
          cell(legacy_stability)};
      comparison << csv_row(fields);
    }
  }
  return suite;
}

ConvergenceOutcome convergence_report(const ScenarioConfig& config,
                                      int level_count,
                                      const RunOptions& options) {
  if (level_count < 3) {
    throw std::invalid_argument("convergence report: need >= 3 resolutions");
  }
  const ScenarioContext ctx = build_context(config, options);
  std::optional<ExactSolution> exact;
  if (config.exact_id) {
    exact = make_exact_solution(config.dimension, *config.exact_id,
                                config.exact_params);
    if (exact->valid_until < config.solver.end_time) {
      throw std::runtime_error(
          "scenario " + config.name +
          ": the reference solution stops being valid before end_time");
    }
  }

  ConvergenceOutcome outcome;
  const fs::path dir = options.out_dir / config.name;
  fs::create_directories(dir);

  for (int j = 0; j < level_count; ++j) {
    const int multiplier = 1 << j;
    const std::vector<std::int64_t> cells =
        scaled_cells(config, multiplier, options.resolution_scale);
    const LevelResult level = run_level(config, ctx, cells);

    ConvergenceEntry entry;
    entry.level = j + 1;
    entry.cells_per_axis = level.grid->cells()[0];
    entry.spacing = level.grid->spacing();
    if (exact) {
      const ScalarField reference =
          exact->sample(level.grid, level.first.times.back());
      entry.has_error = true;
      entry.l1_error = l1_distance(level.first.snapshots.back(), reference);
      if (!outcome.levels.empty() && outcome.levels.back().has_error &&
          outcome.levels.back().l1_error > 0.0 && entry.l1_error > 0.0) {
        entry.has_order = true;
        entry.observed_order =
            std::log2(outcome.levels.back().l1_error / entry.l1_error);
      }
    }
    for (const EstimateReport& report : level.reports) {
      entry.rows.push_back(to_row(config.name, report, multiplier));
    }
    outcome.levels.push_back(std::move(entry));
  }

  // Least-squares slope of log error against log spacing.
  if (exact) {
    double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
    int count = 0;
    for (const ConvergenceEntry& entry : outcome.levels) {
      if (!entry.has_error || entry.l1_error <= 0.0) continue;
      const double x = std::log(entry.spacing);
      const double y = std::log(entry.l1_error);
      sum_x += x;
      sum_y += y;
      sum_xx += x * x;
      sum_xy += x * y;
      ++count;
    }
    if (count >= 2) {
      outcome.has_overall_order = true;
      outcome.overall_order = (count * sum_xy - sum_x * sum_y) /
                              (count * sum_xx - sum_x * sum_x);
    }
  }

  outcome.table_path = dir / "convergence.csv";
  std::ofstream table(outcome.table_path);
  if (!table) {
    throw std::runtime_error("cannot write " + outcome.table_path.string());
  }
  table << "level,cells,h,l1_error,observed_order,estimate,lhs,rhs,margin,"
           "verdict\n";
  for (const ConvergenceEntry& entry : outcome.levels) {
    const std::string shared[] = {
        std::to_string(entry.level), std::to_string(entry.cells_per_axis),
        format_double(entry.spacing),
        entry.has_error ? format_double(entry.l1_error) : std::string(),
        entry.has_order ? format_double(entry.observed_order)
                        : std::string()};
    if (entry.rows.empty()) {
      const std::string fields[] = {shared[0], shared[1], shared[2],
                                    shared[3], shared[4], "",
                                    "",        "",        "",
                                    ""};
      table << csv_row(fields);
    } else {
      for (const EstimateRow& row : entry.rows) {
        const std::string fields[] = {shared[0],
                                      shared[1],
                                      shared[2],
                                      shared[3],
                                      shared[4],
                                      row.estimate,
                                      format_double(row.lhs),
                                      format_double(row.rhs),
                                      format_double(row.margin),
                                      verdict_name(row.verdict)};
        table << csv_row(fields);
      }
    }
  }
  return outcome;
}

}  // namespace balaw
