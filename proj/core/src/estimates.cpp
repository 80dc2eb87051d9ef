#include "balaw/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "balaw/exp_ratio.hpp"
#include "balaw/functionals.hpp"
#include "balaw/kahan.hpp"
#include "balaw/range_track.hpp"
#include "balaw/sup_norm.hpp"

namespace balaw {
namespace {

GridMeta grid_meta(const Grid& grid) {
  GridMeta meta;
  meta.h = grid.spacing();
  meta.dimension = grid.dimension();
  meta.cells = grid.cells();
  return meta;
}

double resolve_allowance(const EstimateOptions& options, double h,
                         double scale) {
  if (options.discretization_allowance >= 0.0) {
    return options.discretization_allowance;
  }
  return 4.0 * h * scale;
}

void require_snapshots(const Trajectory& trajectory, const char* caller) {
  if (trajectory.times.size() < 2 ||
      trajectory.times.size() != trajectory.snapshots.size()) {
    throw std::invalid_argument(std::string(caller) +
                                ": trajectory needs at least two snapshots");
  }
}

void require_aligned(const Trajectory& a, const Trajectory& b,
                     const char* caller) {
  if (!(*a.grid == *b.grid)) {
    throw std::invalid_argument(std::string(caller) +
                                ": trajectories live on different grids");
  }
  if (a.times != b.times) {
    throw std::invalid_argument(std::string(caller) +
                                ": trajectories have different snapshot times");
  }
}

/// Slab over the trajectory's support union; the whole domain only when the
/// solution is identically below the support threshold.
DomainSlab support_slab(const RangeHistory& history, const Grid& grid) {
  const Box space = history.global_support.is_empty
                        ? grid.domain()
                        : history.global_support.as_box();
  return solution_slab(history, space);
}

/// |grad (F - div f)| reduced to a scalar for the slab sampler.
SlabFn gradient_magnitude(ModelPtr model) {
  auto buffer = std::make_shared<std::vector<double>>(model->dimension());
  return [model, buffer](double t, std::span<const double> x, double u) {
    model->balance_gradient(t, x, u, *buffer);
    return euclidean_norm(*buffer);
  };
}

/// Exact-zero probe on a coarse lattice. Only ever used to skip an integral
/// whose integrand vanishes identically; any nonzero sample forces the full
/// cell sums, so a false skip can only make the checked bound smaller.
bool vanishes_on_lattice(const SlabFn& fn, const DomainSlab& slab) {
  SamplingSpec coarse;
  coarse.points_per_axis = 9;
  coarse.refinement_rounds = 0;
  coarse.polish = false;
  return sup_over_slab(fn, slab, coarse).value == 0.0;
}

/// Cell sum over the grid (restricted to `region`) of the value-axis sup of
/// the Euclidean norm of grad (F - div f) at one time.
double gradient_cell_sum(const BalanceLawModel& model, const Grid& grid,
                         const Region& region, double t, double bound,
                         int samples) {
  const int dim = grid.dimension();
  std::vector<double> x(dim);
  std::vector<double> g(dim);
  struct Ctx {
    const BalanceLawModel* model;
    double t;
    std::span<const double> x;
    std::span<double> g;
  } ctx{&model, t, x, g};
  const std::function<double(double)> fn = [&ctx](double u) {
    ctx.model->balance_gradient(ctx.t, ctx.x, u, ctx.g);
    return euclidean_norm(ctx.g);
  };
  KahanSum sum;
  const bool whole = region.kind == Region::Kind::whole;
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
    grid.cell_center(c, x);
    if (!whole && !region.contains(x)) continue;
    sum.add(value_axis_sup(fn, bound, samples));
  }
  return sum.value() * grid.cell_volume();
}

/// Cell sum over a region of the value-axis sup of |(F - G) - div (f - g)|,
/// with the difference model supplying both entries.
double defect_cell_sum(const BalanceLawModel& difference, const Grid& grid,
                       const Region& region, double t, double bound,
                       int samples) {
  const int dim = grid.dimension();
  std::vector<double> x(dim);
  struct Ctx {
    const BalanceLawModel* difference;
    double t;
    std::span<const double> x;
  } ctx{&difference, t, x};
  const std::function<double(double)> fn = [&ctx](double u) {
    return std::abs(ctx.difference->source(ctx.t, ctx.x, u) -
                    ctx.difference->flux_div(ctx.t, ctx.x, u));
  };
  KahanSum sum;
  const bool whole = region.kind == Region::Kind::whole;
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
    grid.cell_center(c, x);
    if (!whole && !region.contains(x)) continue;
    sum.add(value_axis_sup(fn, bound, samples));
  }
  return sum.value() * grid.cell_volume();
}

/// Per-snapshot spatial integrals G(t_i) of the balance-gradient sup, shared
/// by the variation bound, its special case, and the stability bound. Empty
/// result means the integrand vanished on the probe lattice.
std::vector<double> gradient_integrals(const ModelPtr& model,
                                       const Trajectory& trajectory,
                                       const RangeHistory& history,
                                       const DomainSlab& slab,
                                       const EstimateOptions& options) {
  if (vanishes_on_lattice(gradient_magnitude(model), slab)) return {};
  const Grid& grid = *trajectory.grid;
  std::vector<double> values(trajectory.times.size());
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    values[i] =
        gradient_cell_sum(*model, grid, Region::whole(), trajectory.times[i],
                          history.snapshot_bounds[i], options.value_samples);
  }
  return values;
}

}  // namespace

double value_axis_sup(const std::function<double(double)>& fn, double bound,
                      int samples) {
  if (samples < 3) {
    throw std::invalid_argument("value_axis_sup: need at least 3 samples");
  }
  if (!(bound >= 0.0)) {
    throw std::invalid_argument("value_axis_sup: bound must be nonnegative");
  }
  if (bound == 0.0) return fn(0.0);
  double best = fn(-bound);
  double best_u = -bound;
  for (int j = 1; j < samples; ++j) {
    const double u =
        -bound + 2.0 * bound * static_cast<double>(j) / (samples - 1);
    const double v = fn(u);
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  const double window = 2.0 * bound / (samples - 1);
  const double lo = std::max(-bound, best_u - window);
  const double hi = std::min(bound, best_u + window);
  for (int j = 0; j < samples; ++j) {
    const double u = lo + (hi - lo) * static_cast<double>(j) / (samples - 1);
    best = std::max(best, fn(u));
  }
  return best;
}

double time_trapezoid(std::span<const double> times,
                      std::span<const double> values) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("time_trapezoid: length mismatch");
  }
  if (times.size() < 2) {
    throw std::invalid_argument("time_trapezoid: need at least two samples");
  }
  KahanSum sum;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(dt > 0.0)) {
      throw std::invalid_argument("time_trapezoid: times must increase");
    }
    sum.add(0.5 * dt * (values[i] + values[i - 1]));
  }
  return sum.value();
}

double kruzkov_bound(double initial_distance, double source_rate, double t) {
  return std::exp(source_rate * t) * initial_distance;
}

EstimateReport check_kruzkov(const ModelPtr& model, const Trajectory& first,
                             const Trajectory& second,
                             const EstimateOptions& options) {
  require_snapshots(first, "check_kruzkov");
  require_snapshots(second, "check_kruzkov");
  require_aligned(first, second, "check_kruzkov");
  const Grid& grid = *first.grid;
  const double end_time = first.times.back();

  const RangeHistory joint =
      merge_histories(track_range(first.times, first.snapshots),
                      track_range(second.times, second.snapshots));
  const DomainSlab ambient = solution_slab(joint, grid.domain());
  const double source_rate =
      sup_over_slab(source_u_magnitude(model), ambient, options.sampling)
          .value;

  const double initial_distance =
      l1_distance(first.snapshots.front(), second.snapshots.front());
  const double lhs =
      l1_distance(first.snapshots.back(), second.snapshots.back());
  const double initial_variation = total_variation(first.snapshots.front());

  std::vector<EstimateTerm> terms;
  terms.push_back({"initial_distance_growth",
                   kruzkov_bound(initial_distance, source_rate, end_time),
                   "initial L1 distance grown at the ambient source rate"});
  std::map<std::string, double> coefficients{
      {"source_u_sup", source_rate},
      {"value_bound", joint.global_bound},
      {"initial_distance", initial_distance},
  };
  EstimateReport report = make_report(
      "kruzkov", lhs, std::move(terms), std::move(coefficients),
      options.tolerance_rel,
      resolve_allowance(options, grid.spacing(), initial_variation));
  report.grid = grid_meta(grid);
  return report;
}

EstimateReport tv_bound_rhs(const ModelPtr& model, const Trajectory& trajectory,
                            const EstimateOptions& options) {
  require_snapshots(trajectory, "tv_bound_rhs");
  const Grid& grid = *trajectory.grid;
  const double end_time = trajectory.times.back();
  const RangeHistory history =
      track_range(trajectory.times, trajectory.snapshots);
  const DomainSlab slab = support_slab(history, grid);
  const SingleRates rates =
      single_solution_rates(model, slab, options.sampling);
  const double initial_variation = total_variation(trajectory.snapshots.front());

  std::vector<EstimateTerm> terms;
  terms.push_back(
      {"initial_variation_growth",
       initial_variation * std::exp(rates.tv_growth_rate * end_time),
       "initial variation grown at the sharp rate"});

  std::vector<std::string> notes;
  const std::vector<double> integrals =
      gradient_integrals(model, trajectory, history, slab, options);
  if (integrals.empty()) {
    terms.push_back({"source_variation", 0.0,
                     "grad(F - div f) vanishes on the probe lattice"});
  } else {
    std::vector<double> weighted(integrals.size());
    for (std::size_t i = 0; i < integrals.size(); ++i) {
      weighted[i] =
          std::exp(rates.tv_growth_rate * (end_time - trajectory.times[i])) *
          integrals[i];
    }
    terms.push_back({"source_variation",
                     rates.dimension_weight *
                         time_trapezoid(trajectory.times, weighted),
                     "weighted space-time integral of grad(F - div f)"});
  }

  std::map<std::string, double> coefficients{
      {"tv_growth_rate", rates.tv_growth_rate},
      {"legacy_tv_growth_rate", rates.legacy_tv_growth_rate},
      {"dimension_weight", rates.dimension_weight},
      {"flux_u_grad_sup", rates.flux_u_grad_sup},
      {"source_u_sup", rates.source_u_sup},
      {"value_bound", history.global_bound},
      {"initial_variation", initial_variation},
  };
  EstimateReport report = make_report(
      "tv_theorem", 0.0, std::move(terms), std::move(coefficients),
      options.tolerance_rel,
      resolve_allowance(options, grid.spacing(), initial_variation));
  report.grid = grid_meta(grid);
  report.notes = std::move(notes);
  return report;
}

EstimateReport check_tv_theorem(const ModelPtr& model,
                                const Trajectory& trajectory,
                                const EstimateOptions& options) {
  EstimateReport report = tv_bound_rhs(model, trajectory, options);
  report.lhs = total_variation(trajectory.snapshots.back());
  report.verdict = judge(report.lhs, report.rhs, report.tolerance_rel,
                         report.discretization_allowance);
  return report;
}

EstimateReport check_tv_special_case(const ModelPtr& model,
                                     const Trajectory& trajectory,
                                     const MollifierProfile& profile,
                                     const EstimateOptions& options) {
  require_snapshots(trajectory, "check_tv_special_case");
  const Grid& grid = *trajectory.grid;
  if (profile.dimension() != grid.dimension()) {
    throw std::invalid_argument(
        "check_tv_special_case: profile dimension does not match the grid");
  }
  const RangeHistory history =
      track_range(trajectory.times, trajectory.snapshots);
  const DomainSlab slab = support_slab(history, grid);

  const double grad_sup =
      sup_over_slab(flux_u_grad_max_entry(model), slab, options.sampling)
          .value;
  const double source_u_sup =
      sup_over_slab(source_u_magnitude(model), slab, options.sampling).value;
  const double tiny = 1e-10 * std::max(1.0, slab.value_bound);
  if (grad_sup > tiny) {
    throw std::runtime_error(
        "CK preconditions not met: the flux u-derivative varies in space "
        "(sampled sup " +
        std::to_string(grad_sup) + ")");
  }
  if (source_u_sup > tiny) {
    throw std::runtime_error(
        "CK preconditions not met: the source depends on u (sampled sup " +
        std::to_string(source_u_sup) + ")");
  }

  const SlabFn u_dependence = [model](double t, std::span<const double> x,
                                      double u) {
    const double at_u = model->source(t, x, u) - model->flux_div(t, x, u);
    const double at_zero = model->source(t, x, 0.0) - model->flux_div(t, x, 0.0);
    return std::abs(at_u - at_zero);
  };
  const bool u_independent =
      sup_over_slab(u_dependence, slab, options.sampling).value <= tiny;

  const MollifierConstants moments = mollifier_constants(profile);
  const double factor = u_independent ? 1.0 : moments.moment_ratio();
  const double initial_variation =
      total_variation(trajectory.snapshots.front());

  std::vector<EstimateTerm> terms;
  terms.push_back({"initial_variation", initial_variation,
                   "initial variation, no growth factor in this regime"});
  const std::vector<double> integrals =
      gradient_integrals(model, trajectory, history, slab, options);
  std::string note = u_independent
                         ? "F - div f is u-independent; factor 1 applies"
                         : "factor m1/c1 applies";
  if (integrals.empty()) {
    terms.push_back({"source_variation", 0.0,
                     "grad(F - div f) vanishes on the probe lattice"});
  } else {
    terms.push_back({"source_variation",
                     factor * time_trapezoid(trajectory.times, integrals),
                     std::move(note)});
  }

  std::map<std::string, double> coefficients{
      {"moment_ratio", moments.moment_ratio()},
      {"dimension_weight",
       single_solution_rates(model, slab, options.sampling).dimension_weight},
      {"variation_factor", factor},
      {"value_bound", history.global_bound},
      {"initial_variation", initial_variation},
  };
  EstimateReport report = make_report(
      "tv_special_ck", total_variation(trajectory.snapshots.back()),
      std::move(terms), std::move(coefficients), options.tolerance_rel,
      resolve_allowance(options, grid.spacing(), initial_variation));
  report.grid = grid_meta(grid);
  return report;
}

StabilityReports stability_bound_rhs(const ModelPtr& model,
                                     const ModelPtr& other,
                                     const PairTrajectories& pair,
                                     const Region& region,
                                     const EstimateOptions& options) {
  require_snapshots(pair.first, "stability_bound_rhs");
  require_snapshots(pair.second, "stability_bound_rhs");
  require_aligned(pair.first, pair.second, "stability_bound_rhs");
  if (region.kind != Region::Kind::ball) {
    throw std::invalid_argument(
        "stability_bound_rhs: the estimate is stated over a ball region");
  }
  const Grid& grid = *pair.first.grid;
  const std::vector<double>& times = pair.first.times;
  const double end_time = times.back();

  const RangeHistory first_history =
      track_range(pair.first.times, pair.first.snapshots);
  const RangeHistory second_history =
      track_range(pair.second.times, pair.second.snapshots);
  const RangeHistory joint = merge_histories(first_history, second_history);

  const DomainSlab first_slab = support_slab(first_history, grid);
  const DomainSlab joint_slab = support_slab(joint, grid);
  const DomainSlab ambient = solution_slab(joint, grid.domain());

  const SingleRates single =
      single_solution_rates(model, first_slab, options.sampling);
  const PairRates rates = pair_rates(model, other, first_slab, joint_slab,
                                     ambient, options.sampling);
  const double initial_variation =
      total_variation(pair.first.snapshots.front());

  // Term 1: initial distance over the ball enlarged by the full horizon.
  const double reach = rates.propagation_speed * end_time;
  const double initial_distance =
      l1_distance(pair.first.snapshots.front(), pair.second.snapshots.front(),
                  Region::ball(region.center, region.radius + reach));
  const double term1 =
      kruzkov_bound(initial_distance, rates.source_growth_rate, end_time);

  // Terms 2 and 3: flux-difference terms, sharp and simplified weights.
  const double term2_sharp =
      exp_ratio(single.tv_growth_rate, rates.source_growth_rate, end_time) *
      initial_variation * rates.flux_difference_rate;
  const double term2_simplified = end_time *
                                  std::exp(rates.mixed_growth_rate * end_time) *
                                  initial_variation *
                                  rates.flux_difference_rate;

  const std::vector<double> integrals = gradient_integrals(
      model, pair.first, first_history, first_slab, options);
  double term3_sharp = 0.0;
  double term3_simplified = 0.0;
  if (!integrals.empty()) {
    std::vector<double> sharp_weighted(integrals.size());
    std::vector<double> simplified_weighted(integrals.size());
    for (std::size_t i = 0; i < integrals.size(); ++i) {
      const double remaining = end_time - times[i];
      sharp_weighted[i] = exp_ratio(single.tv_growth_rate,
                                    rates.source_growth_rate, remaining) *
                          integrals[i];
      simplified_weighted[i] =
          remaining * std::exp(rates.mixed_growth_rate * remaining) *
          integrals[i];
    }
    term3_sharp = single.dimension_weight *
                  time_trapezoid(times, sharp_weighted) *
                  rates.flux_difference_rate;
    term3_simplified = single.dimension_weight *
                       time_trapezoid(times, simplified_weighted) *
                       rates.flux_difference_rate;
  }

  // Term 4: model-difference defect over balls shrinking with time.
  const auto difference =
      std::make_shared<const BalanceLawModel>(model_difference(model, other));
  const SlabFn defect_magnitude = [difference](double t,
                                               std::span<const double> x,
                                               double u) {
    return std::abs(difference->source(t, x, u) - difference->flux_div(t, x, u));
  };
  double term4 = 0.0;
  if (!vanishes_on_lattice(defect_magnitude, ambient)) {
    std::vector<double> weighted(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double remaining = end_time - times[i];
      const Region ball = Region::ball(
          region.center,
          region.radius + rates.propagation_speed * remaining);
      weighted[i] =
          std::exp(rates.source_growth_rate * remaining) *
          defect_cell_sum(*difference, grid, ball, times[i],
                          second_history.snapshot_bounds[i],
                          options.value_samples);
    }
    term4 = time_trapezoid(times, weighted);
  }

  std::map<std::string, double> coefficients{
      {"tv_growth_rate", single.tv_growth_rate},
      {"source_growth_rate", rates.source_growth_rate},
      {"mixed_growth_rate", rates.mixed_growth_rate},
      {"legacy_stability_rate", rates.legacy_stability_rate},
      {"flux_difference_rate", rates.flux_difference_rate},
      {"propagation_speed", rates.propagation_speed},
      {"dimension_weight", single.dimension_weight},
      {"ball_radius", region.radius},
      {"value_bound", joint.global_bound},
      {"initial_variation", initial_variation},
  };
  const double allowance =
      resolve_allowance(options, grid.spacing(), initial_variation);

  const auto build = [&](const char* id, double term2, double term3,
                         const char* weight_note) {
    std::vector<EstimateTerm> terms;
    terms.push_back({"initial_distance_growth", term1,
                     "initial L1 distance over the reach-enlarged ball"});
    terms.push_back({"flux_difference_variation", term2,
                     std::string("initial variation times the flux "
                                 "u-derivative gap, ") +
                         weight_note});
    terms.push_back({"flux_difference_source", term3,
                     std::string("balance-gradient integral times the flux "
                                 "u-derivative gap, ") +
                         weight_note});
    terms.push_back({"defect_integral", term4,
                     "source and flux-divergence mismatch over shrinking "
                     "balls"});
    EstimateReport report =
        make_report(id, 0.0, std::move(terms), coefficients,
                    options.tolerance_rel, allowance);
    report.grid = grid_meta(grid);
    return report;
  };

  StabilityReports reports;
  reports.sharp = build("stability_theorem", term2_sharp, term3_sharp,
                        "exponential-difference weight");
  reports.simplified =
      build("stability_simplified", term2_simplified, term3_simplified,
            "linear-exponential weight");
  reports.simplified.notes.push_back(
      "upper variant: rhs dominates the sharp form by construction");
  return reports;
}

StabilityReports check_stability_theorem(const ModelPtr& model,
                                         const ModelPtr& other,
                                         const PairTrajectories& pair,
                                         const Region& region,
                                         const EstimateOptions& options) {
  StabilityReports reports =
      stability_bound_rhs(model, other, pair, region, options);
  const double lhs = l1_distance(pair.first.snapshots.back(),
                                 pair.second.snapshots.back(), region);
  for (EstimateReport* report : {&reports.sharp, &reports.simplified}) {
    report->lhs = lhs;
    report->verdict = judge(report->lhs, report->rhs, report->tolerance_rel,
                            report->discretization_allowance);
  }
  return reports;
}

}  // namespace balaw
