#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "balaw/catalog.hpp"
#include "balaw/estimates.hpp"
#include "balaw/exp_ratio.hpp"
#include "balaw/functionals.hpp"
#include "balaw/quadrature.hpp"
#include "balaw/report.hpp"
#include "balaw/solver.hpp"
#include "balaw/wallis.hpp"

using namespace balaw;

namespace {

ScalarField bump_field(const GridPtr& grid, double amplitude, double center,
                       double radius) {
  const auto f = make_initial_data(
      grid->dimension(), "bump",
      {{"amplitude", {amplitude}}, {"center", {center}}, {"radius", {radius}}});
  return ScalarField::sample(grid, f);
}

}  // namespace

TEST_CASE("exponential ratio matches its integral form") {
  // (e^{at} - e^{bt})/(a - b) equals the convolution integral
  // int_0^t e^{as} e^{b(t-s)} ds, which adaptive quadrature can check.
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> rate(-3.0, 3.0);
  std::uniform_real_distribution<double> horizon(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rate(rng);
    const double b = rate(rng);
    const double t = horizon(rng);
    const double direct = integrate_or_throw(
        [&](double s) { return std::exp(a * s) * std::exp(b * (t - s)); }, 0.0,
        t, 1e-12, 1e-15);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(t);
    CHECK(std::abs(exp_ratio(a, b, t) - direct) <=
          1e-9 * std::max(1.0, direct));
  }
}

TEST_CASE("exponential ratio is symmetric and continuous at equal rates") {
  CHECK(exp_ratio(2.0, -1.0, 0.7) ==
        doctest::Approx(exp_ratio(-1.0, 2.0, 0.7)).epsilon(1e-14));
  const double limit = 0.7 * std::exp(1.5 * 0.7);
  CHECK(std::abs(exp_ratio(1.5, 1.5, 0.7) - limit) <= 1e-14);
  const double near = exp_ratio(1.5, 1.5 + 1e-9, 0.7);
  CHECK(std::abs(near - limit) <= 1e-8);
  const double across = exp_ratio(1.5, 1.5 + 1e-7, 0.7);
  CHECK(std::abs(across - limit) <= 1e-6);
}

TEST_CASE("exponential ratio never exceeds the simplified envelope") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> rate(-4.0, 4.0);
  std::uniform_real_distribution<double> horizon(0.0, 2.0);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = rate(rng);
    const double b = rate(rng);
    const double t = horizon(rng);
    const double envelope = t * std::exp(std::max(a, b) * t);
    if (exp_ratio(a, b, t) > envelope * (1.0 + 1e-12)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("value-axis sup refines toward interior maxima") {
  CHECK(value_axis_sup([](double u) { return std::cos(u); },
                       std::numbers::pi) == doctest::Approx(1.0));
  const double off_lattice =
      value_axis_sup([](double u) { return -(u - 0.3) * (u - 0.3); }, 1.0);
  CHECK(off_lattice <= 0.0);
  CHECK(off_lattice >= -1e-4);
  CHECK(value_axis_sup([](double u) { return u; }, 2.0) ==
        doctest::Approx(2.0));
}

TEST_CASE("time trapezoid handles nonuniform lattices") {
  const double times[] = {0.0, 0.25, 1.0};
  const double values[] = {1.0, 2.0, 3.0};
  CHECK(time_trapezoid(times, values) ==
        doctest::Approx(2.25).epsilon(1e-14));

  std::vector<double> lattice;
  std::vector<double> samples;
  for (int i = 0; i <= 256; ++i) {
    const double t = static_cast<double>(i) / 256.0;
    lattice.push_back(t);
    samples.push_back(std::exp(t));
  }
  const double exact = std::exp(1.0) - 1.0;
  CHECK(std::abs(time_trapezoid(lattice, samples) - exact) <= 1e-5);

  const double bad_times[] = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(time_trapezoid(bad_times, values), std::invalid_argument);
  const double lone[] = {0.0};
  CHECK_THROWS_AS(time_trapezoid(lone, lone), std::invalid_argument);
}

TEST_CASE("the L1 expansion bound reduces to contraction without a source") {
  const ModelPtr model = make_model(1, "burgers", {}, "none", {});
  GridPtr grid = make_grid(Box{{-3.0}, {3.0}}, {121});
  const PairTrajectories pair =
      solve_pair(model, bump_field(grid, 1.0, -0.5, 1.0), model,
                 bump_field(grid, 0.8, 0.3, 1.2), SolverConfig{0.5, 8});

  const EstimateReport report =
      check_kruzkov(model, pair.first, pair.second);
  CHECK(report.estimate_id == "kruzkov");
  CHECK(report.verdict == Verdict::holds);
  CHECK(report.coefficients.at("source_u_sup") == 0.0);

  const double initial_distance =
      l1_distance(pair.first.snapshots.front(), pair.second.snapshots.front());
  REQUIRE(report.terms.size() == 1);
  CHECK(report.terms[0].id == "initial_distance_growth");
  CHECK(report.rhs ==
        doctest::Approx(initial_distance).epsilon(1e-13));
  CHECK(report.lhs <= report.rhs * (1.0 + 1e-12));
  CHECK(kruzkov_bound(2.0, 0.5, 1.0) ==
        doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-14));
}

TEST_CASE("the variation bound degenerates to the initial variation for a "
          "homogeneous flux") {
  const ModelPtr model = make_model(1, "burgers", {}, "none", {});
  GridPtr grid = make_grid(Box{{-3.0}, {3.0}}, {161});
  const Trajectory run =
      solve(model, bump_field(grid, 1.0, 0.0, 1.0), SolverConfig{0.5, 8});

  const EstimateReport report = check_tv_theorem(model, run);
  CHECK(report.estimate_id == "tv_theorem");
  CHECK(report.verdict == Verdict::holds);
  CHECK(report.coefficients.at("tv_growth_rate") == 0.0);
  CHECK(report.coefficients.at("legacy_tv_growth_rate") == 0.0);
  CHECK(report.coefficients.at("dimension_weight") ==
        doctest::Approx(wallis_integral(1)).epsilon(1e-14));

  const double initial_variation = total_variation(run.snapshots.front());
  REQUIRE(report.terms.size() == 2);
  CHECK(report.terms[0].id == "initial_variation_growth");
  CHECK(report.terms[0].value ==
        doctest::Approx(initial_variation).epsilon(1e-13));
  CHECK(report.terms[1].id == "source_variation");
  CHECK(report.terms[1].value == 0.0);
  CHECK(report.rhs == doctest::Approx(initial_variation).epsilon(1e-13));

  double term_sum = 0.0;
  for (const EstimateTerm& term : report.terms) term_sum += term.value;
  CHECK(report.rhs == doctest::Approx(term_sum).epsilon(1e-15));
}

TEST_CASE("the special-case bound rejects a spatially varying flux slope") {
  const ModelPtr model = make_model(
      1, "variable_advection",
      {{"base", {0.0}}, {"amplitude", {1.0}}, {"wavenumber", {1.0}},
       {"phase", {0.0}}},
      "none", {});
  GridPtr grid = make_grid(Box{{-2.0}, {2.0}}, {81});
  const Trajectory run =
      solve(model, bump_field(grid, 1.0, 0.0, 1.0), SolverConfig{0.25, 4});
  const MollifierProfile profile = MollifierProfile::build(0.5, 1);
  CHECK_THROWS_WITH_AS(check_tv_special_case(model, run, profile),
                       doctest::Contains("CK preconditions not met"),
                       std::runtime_error);
}

TEST_CASE("the special-case bound takes factor one for a clean defect") {
  const ModelPtr model = make_model(
      1, "advection", {{"speed", {1.0}}}, "gaussian",
      {{"amplitude", {1.0}}, {"width", {1.0}}, {"center", {0.0}}});
  GridPtr grid = make_grid(Box{{-6.0}, {6.0}}, {241});
  const Trajectory run =
      solve(model, bump_field(grid, 1.0, 0.0, 1.0), SolverConfig{0.5, 8});
  const MollifierProfile profile = MollifierProfile::build(0.5, 1);

  const EstimateReport report = check_tv_special_case(model, run, profile);
  CHECK(report.estimate_id == "tv_special_ck");
  CHECK(report.verdict == Verdict::holds);
  CHECK(report.coefficients.at("variation_factor") == 1.0);
}

TEST_CASE("the special-case factor switches to the moment ratio for a "
          "value-dependent defect") {
  // Hand-built entries: the declared flux-slope gradient is zero (so the
  // preconditions pass on the declared data) while the declared divergence
  // depends on the value, forcing the profile-dependent factor.
  BalanceLawModel::Parts parts;
  parts.dimension = 2;
  parts.name = "declared-defect";
  parts.flux = [](double, std::span<const double> x, double u,
                  std::span<double> out) {
    out[0] = std::sin(x[0]) * u;
    out[1] = 0.0;
  };
  parts.flux_u = [](double, std::span<const double> x, double,
                    std::span<double> out) {
    out[0] = std::sin(x[0]);
    out[1] = 0.0;
  };
  parts.flux_u_grad = [](double, std::span<const double>, double,
                         std::span<double> out) {
    for (double& entry : out) entry = 0.0;
  };
  parts.source = [](double, std::span<const double>, double) { return 0.0; };
  parts.source_is_zero = true;
  parts.source_u = [](double, std::span<const double>, double) { return 0.0; };
  parts.flux_div = [](double, std::span<const double> x, double u) {
    return std::cos(x[0]) * u;
  };
  parts.balance_gradient = [](double, std::span<const double> x, double u,
                              std::span<double> out) {
    out[0] = std::sin(x[0]) * u;
    out[1] = 0.0;
  };
  const ModelPtr model =
      std::make_shared<const BalanceLawModel>(std::move(parts));

  GridPtr grid = make_grid(Box{{-2.0, -2.0}, {2.0, 2.0}}, {41, 41});
  const Trajectory run =
      solve(model, bump_field(grid, 1.0, 0.0, 1.0), SolverConfig{0.1, 2});
  const MollifierProfile profile = MollifierProfile::build(0.5, 2);

  const EstimateReport report = check_tv_special_case(model, run, profile);
  CHECK(std::abs(report.coefficients.at("variation_factor") -
                 2.0 * wallis_integral(2)) <= 1e-8);

  const MollifierProfile mismatched = MollifierProfile::build(0.5, 1);
  CHECK_THROWS_AS(check_tv_special_case(model, run, mismatched),
                  std::invalid_argument);
}

TEST_CASE("the stability bound: sharp never exceeds simplified") {
  const ModelPtr a = make_model(1, "burgers", {{"scale", {1.0}}}, "none", {});
  const ModelPtr b = make_model(1, "burgers", {{"scale", {1.2}}}, "none", {});
  GridPtr grid = make_grid(Box{{-3.0}, {3.0}}, {161});
  const ScalarField shared = bump_field(grid, 1.0, 0.0, 1.0);
  const PairTrajectories pair =
      solve_pair(a, shared, b, shared, SolverConfig{0.5, 8});
  const Region region = Region::ball({0.0}, 3.0);

  const StabilityReports reports =
      check_stability_theorem(a, b, pair, region);
  CHECK(reports.sharp.estimate_id == "stability_theorem");
  CHECK(reports.simplified.estimate_id == "stability_simplified");
  CHECK(reports.sharp.rhs <= reports.simplified.rhs * (1.0 + 1e-12));
  CHECK(reports.sharp.verdict == Verdict::holds);
  CHECK(reports.simplified.verdict == Verdict::holds);
  CHECK(reports.sharp.lhs == reports.simplified.lhs);

  for (const EstimateReport* report :
       {&reports.sharp, &reports.simplified}) {
    double initial_growth = 0.0;
    double term_sum = 0.0;
    for (const EstimateTerm& term : report->terms) {
      term_sum += term.value;
      if (term.id == "initial_distance_growth") initial_growth = term.value;
    }
    CHECK(initial_growth == 0.0);
    CHECK(report->rhs == doctest::Approx(term_sum).epsilon(1e-14));
  }
}

TEST_CASE("verdicts split at the tolerance boundary") {
  CHECK(judge(1.0, 1.0, 0.0, 0.0) == Verdict::holds);
  CHECK(judge(0.5, 1.0, 0.0, 0.0) == Verdict::holds);
  CHECK(judge(1.0 + 1e-6, 1.0, 1e-3, 0.0) == Verdict::holds_within_tolerance);
  CHECK(judge(1.1, 1.0, 1e-3, 0.2) == Verdict::holds_within_tolerance);
  CHECK(judge(2.0, 1.0, 1e-3, 0.0) == Verdict::violated);
  CHECK(verdict_name(Verdict::holds) == "holds");
  CHECK(verdict_name(Verdict::holds_within_tolerance) ==
        "holds_within_tolerance");
  CHECK(verdict_name(Verdict::violated) == "violated");
}

TEST_CASE("reports are sums of their terms and reject duplicates") {
  std::vector<EstimateTerm> terms{{"alpha", 1.5, ""}, {"beta", 0.25, ""}};
  const EstimateReport report =
      make_report("kruzkov", 1.0, terms, {{"rate", 2.0}}, 1e-3, 0.01);
  CHECK(report.rhs == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(report.margin() == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(report.verdict == Verdict::holds);

  std::vector<EstimateTerm> clashing{{"alpha", 1.0, ""}, {"alpha", 2.0, ""}};
  CHECK_THROWS(make_report("kruzkov", 0.0, clashing, {}, 1e-3, 0.0));
}

TEST_CASE("reports round-trip through JSON") {
  std::vector<EstimateTerm> terms{
      {"initial_variation_growth", 2.125, "grown initial variation"},
      {"source_variation", 0.0625, "weighted source column"}};
  EstimateReport report =
      make_report("tv_theorem", 2.0, terms,
                  {{"tv_growth_rate", 3.0}, {"dimension_weight", 1.0}}, 1e-3,
                  0.015625);
  report.scenario = "round-trip";
  report.grid = GridMeta{0.03125, 1, {128}};
  report.notes.push_back("synthetic report for the serialization test");

  const std::string text = report_to_json(report);
  const EstimateReport copy = report_from_json(text);
  CHECK(copy.estimate_id == report.estimate_id);
  CHECK(copy.scenario == report.scenario);
  CHECK(copy.lhs == report.lhs);
  CHECK(copy.rhs == report.rhs);
  CHECK(copy.tolerance_rel == report.tolerance_rel);
  CHECK(copy.discretization_allowance == report.discretization_allowance);
  CHECK(copy.verdict == report.verdict);
  REQUIRE(copy.terms.size() == report.terms.size());
  for (std::size_t i = 0; i < report.terms.size(); ++i) {
    CHECK(copy.terms[i].id == report.terms[i].id);
    CHECK(copy.terms[i].value == report.terms[i].value);
  }
  CHECK(copy.coefficients == report.coefficients);
  CHECK(copy.grid.h == report.grid.h);
  CHECK(copy.grid.cells == report.grid.cells);
  // Per-term notes are flattened into the notes array on the wire.
  const std::vector<std::string> wire_notes{
      "initial_variation_growth: grown initial variation",
      "source_variation: weighted source column",
      "synthetic report for the serialization test"};
  CHECK(copy.notes == wire_notes);
  CHECK(report_to_json(copy) == text);

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "balaw-test-report";
  fs::create_directories(dir);
  const fs::path path = dir / "report.json";
  write_report_json(report, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string contents((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  CHECK(report_from_json(contents).rhs == report.rhs);
  fs::remove_all(dir);
}
