#include "balaw/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "balaw/wallis.hpp"

namespace balaw {
namespace {

void check_model(const ModelPtr& model) {
  if (!model) throw std::invalid_argument("null model");
}

}  // namespace

SlabFn source_u_magnitude(ModelPtr model) {
  check_model(model);
  return [model](double t, std::span<const double> x, double u) {
    return std::abs(model->source_u(t, x, u));
  };
}

SlabFn flux_u_grad_max_entry(ModelPtr model) {
  check_model(model);
  const size_t n = static_cast<size_t>(model->dimension());
  return [model, buffer = std::vector<double>(n * n)](
             double t, std::span<const double> x, double u) mutable {
    model->flux_u_grad(t, x, u, buffer);
    double worst = 0.0;
    for (double entry : buffer) worst = std::max(worst, std::abs(entry));
    return worst;
  };
}

SlabFn flux_u_magnitude(ModelPtr model) {
  check_model(model);
  const size_t n = static_cast<size_t>(model->dimension());
  return [model, buffer = std::vector<double>(n)](
             double t, std::span<const double> x, double u) mutable {
    model->flux_u(t, x, u, buffer);
    return euclidean_norm(buffer);
  };
}

SingleRates single_solution_rates(const ModelPtr& model, const DomainSlab& slab,
                                  const SamplingSpec& spec) {
  check_model(model);
  const int n = model->dimension();
  if (slab.space.dimension() != n) {
    throw std::invalid_argument("slab dimension does not match the model");
  }
  SingleRates rates;
  SupResult grad = sup_over_slab(flux_u_grad_max_entry(model), slab, spec);
  SupResult source = sup_over_slab(source_u_magnitude(model), slab, spec);
  rates.flux_u_grad_sup = grad.value;
  rates.source_u_sup = source.value;
  rates.tv_growth_rate =
      static_cast<double>(2 * n + 1) * grad.value + source.value;
  rates.dimension_weight = static_cast<double>(n) * wallis_integral(n);
  rates.legacy_tv_growth_rate = rates.dimension_weight * rates.tv_growth_rate;
  rates.evaluations = grad.evaluations + source.evaluations;
  return rates;
}

PairRates pair_rates(const ModelPtr& model, const ModelPtr& other,
                     const DomainSlab& first_slab, const DomainSlab& joint_slab,
                     const DomainSlab& ambient_slab, const SamplingSpec& spec) {
  check_model(model);
  check_model(other);
  const int n = model->dimension();
  if (other->dimension() != n) {
    throw std::invalid_argument("models have different dimensions");
  }
  if (first_slab.space.dimension() != n || joint_slab.space.dimension() != n ||
      ambient_slab.space.dimension() != n) {
    throw std::invalid_argument("slab dimension does not match the models");
  }
  const ModelPtr difference =
      std::make_shared<const BalanceLawModel>(model_difference(model, other));

  PairRates rates;
  SupResult grad =
      sup_over_slab(flux_u_grad_max_entry(model), first_slab, spec);
  SupResult source = sup_over_slab(source_u_magnitude(model), joint_slab, spec);
  SupResult source_diff =
      sup_over_slab(source_u_magnitude(difference), joint_slab, spec);
  SupResult flux_diff =
      sup_over_slab(flux_u_magnitude(difference), first_slab, spec);
  SupResult speed = sup_over_slab(flux_u_magnitude(other), ambient_slab, spec);

  rates.flux_u_grad_sup = grad.value;
  rates.source_growth_rate = source.value;
  rates.mixed_growth_rate =
      static_cast<double>(2 * n + 1) * grad.value + source.value;
  rates.legacy_stability_rate = static_cast<double>(2 * n) * grad.value +
                                source.value + source_diff.value;
  rates.source_difference_u_sup = source_diff.value;
  rates.flux_difference_rate = flux_diff.value;
  rates.propagation_speed = speed.value;
  rates.evaluations = grad.evaluations + source.evaluations +
                      source_diff.evaluations + flux_diff.evaluations +
                      speed.evaluations;
  return rates;
}

double propagation_speed(const ModelPtr& model, const DomainSlab& slab,
                         const SamplingSpec& spec) {
  check_model(model);
  return sup_over_slab(flux_u_magnitude(model), slab, spec).value;
}

}  // namespace balaw
