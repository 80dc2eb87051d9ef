#include "doctest.h"

#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "balaw/catalog.hpp"
#include "balaw/exact.hpp"
#include "balaw/model.hpp"

using namespace balaw;

namespace {

DomainSlab unit_slab(int dim, double value_bound = 2.0) {
  DomainSlab slab;
  slab.time_lo = 0.0;
  slab.time_hi = 1.0;
  slab.space = Box{Vec(dim, -2.0), Vec(dim, 2.0)};
  slab.value_bound = value_bound;
  return slab;
}

}  // namespace

TEST_CASE("catalog fluxes evaluate their formulas") {
  const double x1[] = {0.7};
  const double u = 0.8;

  const ModelPtr burgers =
      make_model(1, "burgers", {{"scale", {2.0}}}, "none", {});
  CHECK(burgers->flux_component(0.0, x1, u, 0) ==
        doctest::Approx(2.0 * u * u / 2.0).epsilon(1e-14));
  CHECK(burgers->flux_u_component(0.0, x1, u, 0) ==
        doctest::Approx(2.0 * u).epsilon(1e-14));
  CHECK(burgers->source(0.0, x1, u) == 0.0);
  CHECK(burgers->source_is_zero());

  const ModelPtr advection =
      make_model(1, "advection", {{"speed", {-1.5}}}, "none", {});
  CHECK(advection->flux_component(0.0, x1, u, 0) ==
        doctest::Approx(-1.5 * u).epsilon(1e-14));
  CHECK(advection->flux_div(0.0, x1, u) == doctest::Approx(0.0));

  const ModelPtr sine = make_model(
      1, "variable_advection",
      {{"base", {0.0}}, {"amplitude", {1.0}}, {"wavenumber", {1.0}},
       {"phase", {0.0}}},
      "none", {});
  CHECK(sine->flux_component(0.0, x1, u, 0) ==
        doctest::Approx(std::sin(0.7) * u).epsilon(1e-13));
  CHECK(sine->flux_div(0.0, x1, u) ==
        doctest::Approx(std::cos(0.7) * u).epsilon(1e-13));

  const double x2[] = {0.7, -0.3};
  const ModelPtr rotor = make_model(
      2, "variable_advection",
      {{"base", {0.5, 0.25}}, {"amplitude", {0.5, 0.5}},
       {"wavenumber", {1.0, 1.0}}, {"phase", {0.0, 0.0}}},
      "none", {});
  CHECK(rotor->flux_component(0.0, x2, u, 0) ==
        doctest::Approx((0.5 + 0.5 * std::sin(-0.3)) * u).epsilon(1e-13));
  CHECK(rotor->flux_div(0.0, x2, u) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("catalog sources evaluate their formulas") {
  const double x[] = {0.5};
  const ModelPtr gaussian = make_model(
      1, "burgers", {}, "gaussian",
      {{"amplitude", {2.0}}, {"width", {1.5}}, {"center", {0.25}}});
  CHECK(gaussian->source(0.0, x, 0.3) ==
        doctest::Approx(2.0 * std::exp(-0.0625 / 2.25)).epsilon(1e-13));
  CHECK(gaussian->source_u(0.0, x, 0.3) == doctest::Approx(0.0));

  const ModelPtr linear =
      make_model(1, "advection", {}, "linear", {{"rate", {0.7}}});
  CHECK(linear->source(0.0, x, 0.3) == doctest::Approx(0.21).epsilon(1e-13));
  CHECK(linear->source_u(0.0, x, 0.3) == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("catalog rejects unknown ids and parameters") {
  CHECK_THROWS_AS(make_model(1, "septic", {}, "none", {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_model(1, "burgers", {}, "cubic", {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_model(1, "burgers", {{"speeed", {1.0}}}, "none", {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_initial_data(1, "square", {}), std::invalid_argument);
  CHECK_THROWS_AS(
      make_initial_data(1, "bump", {{"radius", {1.0}}, {"radii", {1.0}}}),
      std::invalid_argument);
}

TEST_CASE("initial data formulas") {
  const auto bump = make_initial_data(
      1, "bump", {{"amplitude", {2.0}}, {"center", {0.5}}, {"radius", {1.0}}});
  const double at_center[] = {0.5};
  const double at_edge[] = {1.5};
  const double outside[] = {2.0};
  const double halfway[] = {1.0};
  CHECK(bump(at_center) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(bump(at_edge) == doctest::Approx(0.0));
  CHECK(bump(outside) == 0.0);
  const double expected = 2.0 * std::pow(std::cos(std::numbers::pi / 4.0), 2);
  CHECK(bump(halfway) == doctest::Approx(expected).epsilon(1e-13));

  const auto box = make_initial_data(
      1, "indicator", {{"amplitude", {3.0}}, {"lo", {0.0}}, {"hi", {1.0}}});
  const double inside[] = {0.5};
  const double beyond[] = {1.5};
  CHECK(box(inside) == 3.0);
  CHECK(box(beyond) == 0.0);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  struct Combo {
    int dim;
    const char* flux;
    Params flux_params;
    const char* source;
    Params source_params;
  };
  const Combo combos[] = {
      {1, "burgers", {{"scale", {1.0}}}, "none", {}},
      {1, "advection", {{"speed", {1.0}}}, "gaussian", {}},
      {1, "variable_advection", {}, "linear", {{"rate", {0.5}}}},
      {2, "variable_advection", {}, "gaussian_linear", {}},
      {2, "burgers", {}, "coordinate", {{"slope", {0.5}}, {"axis", {1.0}}}},
      {3, "advection", {}, "none", {}},
  };
  for (const Combo& combo : combos) {
    CAPTURE(combo.flux);
    CAPTURE(combo.source);
    const ModelPtr model = make_model(combo.dim, combo.flux, combo.flux_params,
                                      combo.source, combo.source_params);
    CHECK(model->derivative_consistency(unit_slab(combo.dim)) < 1e-6);
  }
}

TEST_CASE("derivatives fall back to finite differences") {
  BalanceLawModel::Parts parts;
  parts.dimension = 1;
  parts.name = "quartic";
  parts.flux = [](double, std::span<const double>, double u,
                  std::span<double> out) { out[0] = u * u * u * u / 4.0; };
  parts.source = [](double, std::span<const double> x, double u) {
    return std::sin(x[0]) * u;
  };
  const BalanceLawModel model(std::move(parts));

  CHECK(model.provenance(Component::flux) == Provenance::analytic);
  CHECK(model.provenance(Component::flux_u) == Provenance::finite_difference);
  CHECK(model.provenance(Component::source_u) ==
        Provenance::finite_difference);

  const double x[] = {0.3};
  CHECK(std::abs(model.flux_u_component(0.0, x, 0.8, 0) - 0.8 * 0.8 * 0.8) <
        1e-8);
  CHECK(std::abs(model.source_u(0.0, x, 0.8) - std::sin(0.3)) < 1e-8);
  CHECK(model.derivative_consistency(unit_slab(1)) < 1e-6);
}

TEST_CASE("disabled components throw with the requirement named") {
  const ModelPtr burgers = make_model(1, "burgers", {}, "none", {});
  BalanceLawModel copy = *burgers;
  copy.disable(Component::flux_u_grad);
  CHECK(copy.provenance(Component::flux_u_grad) == Provenance::unavailable);
  const double x[] = {0.0};
  double out[1];
  CHECK_THROWS_AS(copy.flux_u_grad(0.0, x, 0.5, out), std::runtime_error);
  CHECK_THROWS_AS(copy.require(Component::flux_u_grad, "variation bound"),
                  std::runtime_error);
}

TEST_CASE("the difference model combines analytic entries") {
  const ModelPtr a = make_model(1, "burgers", {{"scale", {1.0}}}, "none", {});
  const ModelPtr b = make_model(1, "burgers", {{"scale", {1.2}}}, "none", {});
  const BalanceLawModel gap = model_difference(a, b);

  const double x[] = {0.4};
  const double u = 0.9;
  CHECK(gap.flux_component(0.0, x, u, 0) ==
        doctest::Approx(-0.2 * u * u / 2.0).epsilon(1e-13));
  CHECK(gap.flux_u_component(0.0, x, u, 0) ==
        doctest::Approx(-0.2 * u).epsilon(1e-13));
  CHECK(gap.provenance(Component::flux_u) == Provenance::analytic);
  CHECK(gap.source(0.0, x, u) == 0.0);
  CHECK(gap.derivative_consistency(unit_slab(1)) < 1e-6);
}

TEST_CASE("exact advection solution translates the bump") {
  const ExactSolution exact = make_exact_solution(
      1, "advection",
      {{"speed", {1.0}}, {"amplitude", {1.0}}, {"center", {-1.0}},
       {"radius", {1.0}}});
  const auto bump = make_initial_data(
      1, "bump", {{"amplitude", {1.0}}, {"center", {-1.0}}, {"radius", {1.0}}});
  for (double t : {0.0, 0.5, 1.0}) {
    for (double x : {-1.5, -1.0, 0.0, 0.5, 1.0}) {
      const double shifted[] = {x - t};
      const double here[] = {x};
      CHECK(exact.evaluate(t, here) ==
            doctest::Approx(bump(shifted)).epsilon(1e-13));
    }
  }
}

TEST_CASE("exact shock solution: fan, plateau, shock, validity") {
  const ExactSolution exact = make_exact_solution(
      1, "burgers_shock",
      {{"left_value", {1.0}}, {"left_edge", {-1.0}}, {"jump_at", {0.0}},
       {"scale", {1.0}}});
  CHECK(exact.valid_until == doctest::Approx(2.0).epsilon(1e-13));

  const double fan[] = {-0.5};
  const double plateau[] = {0.25};
  const double past[] = {0.75};
  CHECK(exact.evaluate(1.0, fan) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(exact.evaluate(1.0, plateau) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.evaluate(1.0, past) == doctest::Approx(0.0));
  CHECK_THROWS(exact.evaluate(2.5, plateau));
}

TEST_CASE("front position finds the last crossing") {
  GridPtr g = make_grid(Box{{0.0}, {1.0}}, {10});
  std::vector<double> values(10, 0.0);
  values[2] = 1.0;
  values[3] = 1.0;
  values[7] = 0.8;
  const ScalarField u(g, std::move(values));
  CHECK(front_position(u, 0.5) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(front_position(u, 0.9) == doctest::Approx(0.35).epsilon(1e-13));
}

TEST_CASE("a small convergence study shows first-order behavior") {
  const ModelPtr model = make_model(1, "advection", {{"speed", {1.0}}},
                                    "none", {});
  const ExactSolution exact = make_exact_solution(
      1, "advection",
      {{"speed", {1.0}}, {"amplitude", {1.0}}, {"center", {-1.0}},
       {"radius", {1.0}}});
  SolverConfig config;
  config.end_time = 0.25;
  config.snapshot_count = 1;
  const ConvergenceStudy study = convergence_study(
      model, exact, Box{{-3.0}, {3.0}}, 48, 3, config);
  REQUIRE(study.levels.size() == 3);
  CHECK(study.levels[0].l1_error > study.levels[1].l1_error);
  CHECK(study.levels[1].l1_error > study.levels[2].l1_error);
  CHECK(study.order >= 0.5);
}
