#include "balaw/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "balaw/functionals.hpp"
#include "balaw/geometry.hpp"

namespace balaw {
namespace {

std::string format_value(double value) {
  std::ostringstream out;
  out.precision(6);
  out << value;
  return out.str();
}

/// Midpoint tensor rule for the x-integral of the balance gradient norm,
/// maximized over sampled u in [-U, U].
double ladder_integral(const BalanceLawModel& model, const Box& box, double t,
                       double value_bound, int points_per_axis) {
  const int n = box.dimension();
  const size_t rank = static_cast<size_t>(n);
  std::vector<double> x(rank);
  std::vector<double> gradient(rank);
  std::vector<int> index(rank, 0);
  std::vector<double> u_samples;
  const int u_count = 9;
  for (int i = 0; i < u_count; ++i) {
    u_samples.push_back(value_bound *
                        (-1.0 + 2.0 * static_cast<double>(i) /
                                    static_cast<double>(u_count - 1)));
  }
  double cell_volume = 1.0;
  for (int d = 0; d < n; ++d) {
    cell_volume *= box.extent(d) / static_cast<double>(points_per_axis);
  }
  auto place = [&](size_t d) {
    x[d] = box.lo[d] + box.extent(static_cast<int>(d)) *
                           (static_cast<double>(index[d]) + 0.5) /
                           static_cast<double>(points_per_axis);
  };
  for (size_t d = 0; d < rank; ++d) place(d);
  double sum = 0.0;
  double compensation = 0.0;
  while (true) {
    double worst = 0.0;
    for (double u : u_samples) {
      model.balance_gradient(t, x, u, gradient);
      worst = std::max(worst, euclidean_norm(gradient));
    }
    const double term = worst * cell_volume - compensation;
    const double next = sum + term;
    compensation = (next - sum) - term;
    sum = next;
    size_t d = rank;
    bool done = true;
    while (d > 0) {
      --d;
      if (++index[d] < points_per_axis) {
        place(d);
        done = false;
        break;
      }
      index[d] = 0;
      place(d);
    }
    if (done) break;
  }
  return sum;
}

HypothesisCheck consistency_check(const BalanceLawModel& model,
                                  const DomainSlab& slab) {
  HypothesisCheck check;
  check.id = "derivative_consistency";
  bool any_analytic = false;
  for (Component c : {Component::flux_u, Component::flux_u_grad,
                      Component::source_u, Component::flux_div,
                      Component::balance_gradient}) {
    any_analytic |= (model.provenance(c) == Provenance::analytic);
  }
  if (!any_analytic) {
    check.satisfied = true;
    check.note = "all derivatives come from finite differences; no analytic "
                 "entries to cross-check";
    return check;
  }
  check.measure = model.derivative_consistency(slab);
  check.satisfied = check.measure < 5e-3;
  check.note = "worst relative gap between analytic derivatives and finite "
               "differences: " +
               format_value(check.measure);
  return check;
}

HypothesisCheck ladder_check(const BalanceLawModel& model,
                             const DomainSlab& slab) {
  HypothesisCheck check;
  check.id = "balance_gradient_integrable";
  double margin = 0.0;
  for (int d = 0; d < slab.space.dimension(); ++d) {
    margin = std::max(margin, slab.space.extent(d));
  }
  const Box inner = slab.space;
  const Box middle = slab.space.dilated(margin);
  const Box outer = slab.space.dilated(3.0 * margin);
  const int points = 33;
  bool tapers = true;
  double largest = 0.0;
  for (double t : {slab.time_lo, 0.5 * (slab.time_lo + slab.time_hi),
                   slab.time_hi}) {
    const double i0 = ladder_integral(model, inner, t, slab.value_bound, points);
    const double i1 =
        ladder_integral(model, middle, t, slab.value_bound, points);
    const double i2 = ladder_integral(model, outer, t, slab.value_bound, points);
    const double first_increment = i1 - i0;
    const double second_increment = i2 - i1;
    largest = std::max(largest, i2);
    if (second_increment > 0.5 * first_increment + 1e-9 * (1.0 + i2)) {
      tapers = false;
    }
  }
  check.measure = largest;
  check.satisfied = tapers;
  check.note = tapers
                   ? "balance gradient mass settles on growing boxes (total " +
                         format_value(largest) + ")"
                   : "balance gradient mass keeps growing on larger boxes; "
                     "the variation bound may be vacuous";
  return check;
}

HypothesisCheck initial_data_check(const ScalarField& initial_data) {
  HypothesisCheck check;
  check.id = "initial_data_regular";
  const double bound = initial_data.max_abs();
  const double mass = l1_norm(initial_data);
  try {
    const double variation = total_variation(initial_data);
    check.measure = variation;
    check.satisfied =
        std::isfinite(variation) && std::isfinite(mass) && std::isfinite(bound);
    check.note = "TV " + format_value(variation) + ", L1 " +
                 format_value(mass) + ", sup " + format_value(bound);
  } catch (const std::exception& error) {
    check.satisfied = false;
    check.note = error.what();
  }
  return check;
}

}  // namespace

bool HypothesisReport::all_satisfied() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.satisfied; });
}

std::vector<std::string> HypothesisReport::warnings() const {
  std::vector<std::string> notes;
  for (const auto& check : checks) {
    if (!check.satisfied) notes.push_back(check.id + ": " + check.note);
  }
  return notes;
}

HypothesisReport check_hypotheses(const ModelPtr& model, const DomainSlab& slab,
                                  const ScalarField& initial_data,
                                  const SamplingSpec&) {
  if (!model) throw std::invalid_argument("null model");
  slab.validate();
  HypothesisReport report;
  report.checks.push_back(consistency_check(*model, slab));
  HypothesisCheck smoothness;
  smoothness.id = "smoothness_assumed";
  smoothness.satisfied = true;
  smoothness.note = "continuity of the flux second derivatives is assumed, "
                    "not checked";
  report.checks.push_back(smoothness);
  report.checks.push_back(ladder_check(*model, slab));
  report.checks.push_back(initial_data_check(initial_data));
  return report;
}

}  // namespace balaw
