#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "balaw/csv.hpp"
#include "balaw/mollifier.hpp"
#include "balaw/runner.hpp"
#include "balaw/scenario.hpp"
#include "balaw/wallis.hpp"

namespace {

namespace fs = std::filesystem;
using namespace balaw;

void print_rows(const std::vector<EstimateRow>& rows) {
  for (const EstimateRow& row : rows) {
    std::cout << "  " << row.estimate << " L" << row.level << ": "
              << verdict_name(row.verdict) << " (lhs " << format_double(row.lhs)
              << ", rhs " << format_double(row.rhs) << ", margin "
              << format_double(row.margin) << ")\n";
  }
}

int run_command(const std::string& config_path, const RunOptions& options) {
  ScenarioConfig config;
  try {
    config = load_scenario(config_path);
  } catch (const std::exception& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  }
  const ScenarioOutcome outcome = run_scenario(config, options);
  std::cout << "scenario " << outcome.name << "\n";
  print_rows(outcome.rows);
  std::cout << "artifacts under " << (options.out_dir / outcome.name).string()
            << "\n";
  return outcome.exit_code();
}

int suite_command(const std::string& directory, const RunOptions& options) {
  if (!fs::is_directory(directory)) {
    std::cerr << "config error: " << directory << " is not a directory\n";
    return 2;
  }
  const SuiteOutcome outcome = run_suite(directory, options);
  if (outcome.scenarios.empty()) {
    std::cerr << "warning: no scenario configs (*.json) in " << directory
              << "\n";
    return 0;
  }
  for (const ScenarioOutcome& scenario : outcome.scenarios) {
    if (scenario.failed) {
      std::cout << "scenario " << scenario.name << ": error: "
                << scenario.error << "\n";
    } else {
      std::cout << "scenario " << scenario.name
                << (scenario.exit_code() == 0 ? ": ok" : ": violated") << "\n";
      print_rows(scenario.rows);
    }
  }
  std::cout << "summary: " << outcome.summary_path.string() << "\n"
            << "coefficient comparison: " << outcome.coefficients_path.string()
            << "\n";
  return outcome.exit_code();
}

int converge_command(const std::string& config_path, int levels,
                     const RunOptions& options) {
  ScenarioConfig config;
  try {
    config = load_scenario(config_path);
  } catch (const std::exception& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  }
  const ConvergenceOutcome outcome =
      convergence_report(config, levels, options);
  for (const ConvergenceEntry& entry : outcome.levels) {
    std::cout << "level " << entry.level << ": cells "
              << entry.cells_per_axis << ", h "
              << format_double(entry.spacing);
    if (entry.has_error) {
      std::cout << ", l1 error " << format_double(entry.l1_error);
    }
    if (entry.has_order) {
      std::cout << ", order " << format_double(entry.observed_order);
    }
    std::cout << "\n";
    print_rows(entry.rows);
  }
  if (outcome.has_overall_order) {
    std::cout << "overall order " << format_double(outcome.overall_order)
              << "\n";
  }
  std::cout << "table: " << outcome.table_path.string() << "\n";
  return 0;
}

int constants_command() {
  std::cout << "N, W_N (half-period cosine power integral), omega_N (unit "
               "ball volume)\n";
  for (int n = 0; n <= 12; ++n) {
    std::cout << n << ", " << format_double(wallis_integral(n)) << ", "
              << format_double(unit_ball_volume(n)) << "\n";
  }
  std::cout << "\nmollifier profile (plateau radius 0.5)\n"
            << "N, C1, M1, M1/C1, N*W_N\n";
  for (int n = 1; n <= 3; ++n) {
    const MollifierProfile profile = MollifierProfile::build(0.5, n);
    const MollifierConstants constants = mollifier_constants(profile);
    std::cout << n << ", " << format_double(constants.c1) << ", "
              << format_double(constants.m1) << ", "
              << format_double(constants.moment_ratio()) << ", "
              << format_double(n * wallis_integral(n)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume entropy solutions of scalar balance laws with "
               "total-variation and stability certificates"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions options;
  std::string out_dir = "out";
  int levels = 4;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "Scenario config file (directory for suite)")
        ->required();
    cmd->add_option("--out", out_dir, "Output directory")
        ->capture_default_str();
    cmd->add_option("--resolution-scale", options.resolution_scale,
                    "Multiplier applied to every configured cell count")
        ->capture_default_str();
    cmd->add_option("--tolerance-rel", options.tolerance_rel,
                    "Override the relative verdict tolerance");
    cmd->add_option("--tolerance-abs", options.tolerance_abs,
                    "Override the absolute verdict allowance");
  };

  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  add_common(run);
  CLI::App* suite =
      app.add_subcommand("suite", "Run every scenario in a directory");
  add_common(suite);
  suite->add_option("--jobs", options.jobs, "Scenarios to run in parallel")
      ->capture_default_str();
  CLI::App* converge = app.add_subcommand(
      "converge", "Refine one scenario dyadically and tabulate errors");
  add_common(converge);
  converge->add_option("--levels", levels, "Number of dyadic resolutions")
      ->capture_default_str();
  CLI::App* constants = app.add_subcommand(
      "constants", "Print the dimensional and mollifier constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  options.out_dir = out_dir;
  try {
    if (run->parsed()) return run_command(config_path, options);
    if (suite->parsed()) return suite_command(config_path, options);
    if (converge->parsed())
      return converge_command(config_path, levels, options);
    if (constants->parsed()) return constants_command();
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 2;
}
