#pragma once

#include <functional>
#include <span>
#include <vector>

#include "balaw/geometry.hpp"

namespace balaw {

/// Scalar observable over a slab point (t, x, u). Callers bake the model
/// component and the reduction (absolute value, Euclidean norm, max entry)
/// into the callable before asking for a supremum.
using SlabFn =
    std::function<double(double t, std::span<const double> x, double u)>;

/// Controls for the tensor-sampling maximizer. Each round keeps the grid
/// resolution and shrinks the search window around the incumbent by
/// `shrink` per axis; `polish` finishes with per-axis parabolic steps.
struct SamplingSpec {
  int points_per_axis = 33;
  int refinement_rounds = 2;
  double shrink = 4.0;
  bool polish = true;
  long max_evaluations = 1 << 26;
};

struct SupResult {
  double value = 0.0;
  /// Maximizer as (t, x_1..x_N, u).
  std::vector<double> argmax;
  long evaluations = 0;
};

/// Maximizes fn over the closed slab [t_lo,t_hi] x box x [-U,U]. Scanning is
/// lexicographic with strict improvement, so ties resolve to the first
/// maximizer and results are reproducible. Throws when fn produces a
/// non-finite value or the evaluation budget is exceeded.
SupResult sup_over_slab(const SlabFn& fn, const DomainSlab& slab,
                        const SamplingSpec& spec = {});

}  // namespace balaw
