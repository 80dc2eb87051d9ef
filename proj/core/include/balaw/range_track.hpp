#pragma once

#include <span>
#include <vector>

#include "balaw/geometry.hpp"
#include "balaw/grid.hpp"

namespace balaw {

/// Envelope of a discrete trajectory: for each snapshot time, the sup norm
/// of the snapshot itself (instantaneous), the largest sup norm seen up to
/// that time (running, nondecreasing), and the snapshot's support box.
struct RangeHistory {
  std::vector<double> times;
  std::vector<double> snapshot_bounds;
  std::vector<double> value_bounds;
  std::vector<SupportBox> supports;
  double global_bound = 0.0;
  SupportBox global_support;

  /// Conservative bound valid on [0, t]: the running max at the first
  /// snapshot time >= t (the last one when t runs past the end).
  double bound_at(double t) const;
};

/// threshold < 0 picks 1e-12 times the largest snapshot value.
RangeHistory track_range(std::span<const double> times,
                         std::span<const ScalarField> snapshots,
                         double support_threshold = -1.0);

/// Pointwise-in-time envelope of two histories sampled at the same times;
/// used when an estimate needs a value bound covering both solutions.
RangeHistory merge_histories(const RangeHistory& a, const RangeHistory& b);

/// Slab spanning the trajectory: its time window, the given spatial box, and
/// the global value bound.
DomainSlab solution_slab(const RangeHistory& history, const Box& domain);

}  // namespace balaw
