#include <benchmark/benchmark.h>

#include <cmath>

#include "balaw/functionals.hpp"
#include "balaw/grid.hpp"
#include "balaw/mollifier.hpp"

using namespace balaw;

namespace {

ScalarField wavy_bump(std::int64_t cells) {
  GridPtr grid = make_grid(Box{{-2.0}, {2.0}}, {cells});
  return ScalarField::sample(grid, [](std::span<const double> x) {
    const double r = std::abs(x[0]);
    if (r >= 1.0) return 0.0;
    const double envelope = std::cos(1.5707963267948966 * r);
    return envelope * envelope * (1.0 + 0.25 * std::sin(20.0 * x[0]));
  });
}

void grid_total_variation(benchmark::State& state) {
  const ScalarField u = wavy_bump(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(total_variation(u));
  }
  state.SetItemsProcessed(state.iterations() * u.grid().cell_count());
}

void mollified_total_variation(benchmark::State& state) {
  const ScalarField u = wavy_bump(state.range(0));
  const MollifierProfile profile = MollifierProfile::build(0.5, 1);
  const double lambda = 16.0 * u.grid().spacing();
  for (auto _ : state) {
    benchmark::DoNotOptimize(tv_via_mollifier(u, profile, lambda));
  }
  state.SetItemsProcessed(state.iterations() * u.grid().cell_count());
}

}  // namespace

BENCHMARK(grid_total_variation)->Arg(1024)->Arg(16384);
BENCHMARK(mollified_total_variation)->Arg(1024)->Arg(4096);
