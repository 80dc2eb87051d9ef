#include "balaw/sup_norm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace balaw {
namespace {

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool degenerate() const { return hi <= lo; }
};

std::vector<Axis> slab_axes(const DomainSlab& slab) {
  slab.validate();
  std::vector<Axis> axes;
  axes.reserve(slab.space.dimension() + 2);
  axes.push_back({slab.time_lo, slab.time_hi});
  for (int d = 0; d < slab.space.dimension(); ++d) {
    axes.push_back({slab.space.lo[static_cast<size_t>(d)],
                    slab.space.hi[static_cast<size_t>(d)]});
  }
  axes.push_back({-slab.value_bound, slab.value_bound});
  return axes;
}

std::string describe_point(std::span<const double> coords) {
  std::ostringstream out;
  out.precision(17);
  out << "t=" << coords[0] << ", x=(";
  for (size_t d = 1; d + 1 < coords.size(); ++d) {
    if (d > 1) out << ", ";
    out << coords[d];
  }
  out << "), u=" << coords[coords.size() - 1];
  return out.str();
}

class Maximizer {
 public:
  Maximizer(const SlabFn& fn, const SamplingSpec& spec) : fn_(fn), spec_(spec) {
    if (spec.points_per_axis < 3) {
      throw std::invalid_argument("points_per_axis must be >= 3");
    }
    if (spec.refinement_rounds < 0 || spec.shrink <= 1.0) {
      throw std::invalid_argument("invalid refinement settings");
    }
  }

  double evaluate(std::span<const double> coords) {
    if (++evaluations_ > spec_.max_evaluations) {
      throw std::runtime_error("sup sampling exceeded its evaluation budget");
    }
    const double value =
        fn_(coords[0], coords.subspan(1, coords.size() - 2), coords.back());
    if (!std::isfinite(value)) {
      throw std::runtime_error("sup sampling hit a non-finite value at " +
                               describe_point(coords));
    }
    return value;
  }

  /// One tensor scan over `window`, in lexicographic odometer order.
  void scan(const std::vector<Axis>& window) {
    const size_t rank = window.size();
    std::vector<int> counts(rank, 1);
    std::vector<int> index(rank, 0);
    for (size_t a = 0; a < rank; ++a) {
      counts[a] = window[a].degenerate() ? 1 : spec_.points_per_axis;
    }
    std::vector<double> coords(rank);
    auto place = [&](size_t a) {
      coords[a] = counts[a] == 1
                      ? 0.5 * (window[a].lo + window[a].hi)
                      : window[a].lo + window[a].width() *
                                           static_cast<double>(index[a]) /
                                           static_cast<double>(counts[a] - 1);
    };
    for (size_t a = 0; a < rank; ++a) place(a);
    while (true) {
      const double value = evaluate(coords);
      if (!has_best_ || value > best_value_) {
        best_value_ = value;
        best_coords_ = coords;
        has_best_ = true;
      }
      size_t a = rank;
      while (a > 0) {
        --a;
        if (++index[a] < counts[a]) {
          place(a);
          break;
        }
        index[a] = 0;
        place(a);
        if (a == 0) return;
      }
    }
  }

  /// Quadratic vertex steps along each axis, two sweeps, step = `steps[a]`.
  /// A step is kept only when it does not lose value, so polish is monotone.
  void polish(const std::vector<Axis>& bounds, const std::vector<double>& steps) {
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (size_t a = 0; a < bounds.size(); ++a) {
        const double h = steps[a];
        if (h <= 0.0) continue;
        std::vector<double> probe = best_coords_;
        auto sample_at = [&](double position) {
          probe[a] = std::clamp(position, bounds[a].lo, bounds[a].hi);
          return evaluate(probe);
        };
        const double center = best_coords_[a];
        const double left = sample_at(center - h);
        const double right = sample_at(center + h);
        const double curvature = left - 2.0 * best_value_ + right;
        double candidate = center;
        if (curvature < 0.0) {
          candidate = center + 0.5 * h * (left - right) / curvature;
        } else if (left > best_value_ || right > best_value_) {
          candidate = left >= right ? center - h : center + h;
        } else {
          continue;
        }
        candidate = std::clamp(candidate, bounds[a].lo, bounds[a].hi);
        probe[a] = candidate;
        const double value = evaluate(probe);
        if (value >= best_value_) {
          best_value_ = value;
          best_coords_ = probe;
        }
      }
    }
  }

  SupResult run(const DomainSlab& slab) {
    const std::vector<Axis> bounds = slab_axes(slab);
    std::vector<Axis> window = bounds;
    scan(window);
    for (int round = 0; round < spec_.refinement_rounds; ++round) {
      for (size_t a = 0; a < window.size(); ++a) {
        if (bounds[a].degenerate()) continue;
        const double half = 0.5 * window[a].width() / spec_.shrink;
        window[a].lo = std::max(bounds[a].lo, best_coords_[a] - half);
        window[a].hi = std::min(bounds[a].hi, best_coords_[a] + half);
      }
      scan(window);
    }
    if (spec_.polish) {
      std::vector<double> steps(window.size(), 0.0);
      for (size_t a = 0; a < window.size(); ++a) {
        if (bounds[a].degenerate()) continue;
        steps[a] = window[a].width() /
                   static_cast<double>(spec_.points_per_axis - 1);
      }
      polish(bounds, steps);
    }
    return {best_value_, best_coords_, evaluations_};
  }

 private:
  const SlabFn& fn_;
  SamplingSpec spec_;
  bool has_best_ = false;
  double best_value_ = 0.0;
  std::vector<double> best_coords_;
  long evaluations_ = 0;
};

}  // namespace

SupResult sup_over_slab(const SlabFn& fn, const DomainSlab& slab,
                        const SamplingSpec& spec) {
  if (!fn) throw std::invalid_argument("sup_over_slab needs a callable");
  Maximizer maximizer(fn, spec);
  return maximizer.run(slab);
}

}  // namespace balaw
