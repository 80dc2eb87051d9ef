#include <benchmark/benchmark.h>

#include "balaw/catalog.hpp"
#include "balaw/grid.hpp"
#include "balaw/solver.hpp"

using namespace balaw;

namespace {

ScalarField bump(const GridPtr& grid) {
  return ScalarField::sample(
      grid, make_initial_data(grid->dimension(), "bump",
                              {{"radius", {1.0}}}));
}

void solve_1d(benchmark::State& state) {
  const ModelPtr model = make_model(1, "burgers", {}, "none", {});
  GridPtr grid = make_grid(Box{{-3.0}, {3.0}},
                           {state.range(0)});
  const ScalarField initial = bump(grid);
  SolverConfig config;
  config.end_time = 0.25;
  config.snapshot_count = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(model, initial, config));
  }
  state.SetItemsProcessed(state.iterations() * grid->cell_count());
}

void solve_2d(benchmark::State& state) {
  const ModelPtr model = make_model(
      2, "variable_advection",
      {{"base", {0.5, 0.25}}, {"amplitude", {0.5, 0.5}}}, "none", {});
  GridPtr grid = make_grid(Box{{-2.0, -2.0}, {2.0, 2.0}},
                           {state.range(0), state.range(0)});
  const ScalarField initial = bump(grid);
  SolverConfig config;
  config.end_time = 0.1;
  config.snapshot_count = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(model, initial, config));
  }
  state.SetItemsProcessed(state.iterations() * grid->cell_count());
}

}  // namespace

BENCHMARK(solve_1d)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(solve_2d)->Arg(64)->Arg(128);
