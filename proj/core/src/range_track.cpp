#include "balaw/range_track.hpp"

#include <algorithm>
#include <stdexcept>

#include "balaw/functionals.hpp"

namespace balaw {

double RangeHistory::bound_at(double t) const {
  if (times.empty()) throw std::logic_error("empty range history");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return value_bounds.back();
  return value_bounds[static_cast<size_t>(it - times.begin())];
}

RangeHistory track_range(std::span<const double> times,
                         std::span<const ScalarField> snapshots,
                         double support_threshold) {
  if (times.size() != snapshots.size() || times.empty()) {
    throw std::invalid_argument("times and snapshots must match and be "
                                "non-empty");
  }
  for (size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("snapshot times must increase");
    }
    if (!(snapshots[i].grid() == snapshots[0].grid())) {
      throw std::invalid_argument("snapshots must share one grid");
    }
  }

  RangeHistory history;
  history.times.assign(times.begin(), times.end());
  double running = 0.0;
  for (const ScalarField& snapshot : snapshots) {
    const double bound = snapshot.max_abs();
    running = std::max(running, bound);
    history.snapshot_bounds.push_back(bound);
    history.value_bounds.push_back(running);
  }
  history.global_bound = running;

  const double threshold =
      support_threshold < 0.0 ? 1e-12 * running : support_threshold;
  for (const ScalarField& snapshot : snapshots) {
    SupportBox support = support_box(snapshot, threshold);
    history.supports.push_back(support);
    history.global_support.merge(support);
  }
  return history;
}

RangeHistory merge_histories(const RangeHistory& a, const RangeHistory& b) {
  if (a.times != b.times) {
    throw std::invalid_argument("histories sample different times");
  }
  RangeHistory merged;
  merged.times = a.times;
  for (size_t i = 0; i < a.times.size(); ++i) {
    merged.snapshot_bounds.push_back(
        std::max(a.snapshot_bounds[i], b.snapshot_bounds[i]));
    merged.value_bounds.push_back(
        std::max(a.value_bounds[i], b.value_bounds[i]));
    SupportBox support = a.supports[i];
    support.merge(b.supports[i]);
    merged.supports.push_back(std::move(support));
  }
  merged.global_bound = std::max(a.global_bound, b.global_bound);
  merged.global_support = a.global_support;
  merged.global_support.merge(b.global_support);
  return merged;
}

DomainSlab solution_slab(const RangeHistory& history, const Box& domain) {
  if (history.times.empty()) throw std::invalid_argument("empty history");
  DomainSlab slab;
  slab.time_lo = history.times.front();
  slab.time_hi = history.times.back();
  slab.space = domain;
  slab.value_bound = history.global_bound;
  slab.validate();
  return slab;
}

}  // namespace balaw
