#include <benchmark/benchmark.h>

#include "balaw/catalog.hpp"
#include "balaw/coefficients.hpp"
#include "balaw/geometry.hpp"
#include "balaw/sup_norm.hpp"

using namespace balaw;

namespace {

void slab_sup(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const ModelPtr model = make_model(
      dim, "variable_advection", {}, "linear", {{"rate", {0.5}}});
  DomainSlab slab;
  slab.time_hi = 1.0;
  slab.space = Box{Vec(dim, -2.0), Vec(dim, 2.0)};
  slab.value_bound = 1.0;
  SamplingSpec spec;
  spec.points_per_axis = 9;
  long evaluations = 0;
  for (auto _ : state) {
    const SupResult result =
        sup_over_slab(flux_u_grad_max_entry(model), slab, spec);
    benchmark::DoNotOptimize(result.value);
    evaluations = result.evaluations;
  }
  state.SetItemsProcessed(state.iterations() * evaluations);
}

}  // namespace

BENCHMARK(slab_sup)->Arg(1)->Arg(2)->Arg(3);
