#pragma once

#include "balaw/geometry.hpp"
#include "balaw/model.hpp"
#include "balaw/sup_norm.hpp"

namespace balaw {

/// Growth rates entering the total-variation bound for one solution. All
/// suprema are taken over the solution slab (time x space box x value range).
/// Matrix norms are max absolute entry; vector norms are Euclidean.
struct SingleRates {
  /// sup of the max-abs entry of the spatial gradient of the flux
  /// u-derivative.
  double flux_u_grad_sup = 0.0;
  /// sup of |d source / du|.
  double source_u_sup = 0.0;
  /// Sharp rate (2N+1) * flux_u_grad_sup + source_u_sup.
  double tv_growth_rate = 0.0;
  /// N * W_N where W_N is the half-period cosine power integral.
  double dimension_weight = 0.0;
  /// Older rate; equals dimension_weight * tv_growth_rate by construction,
  /// kept for side-by-side reporting.
  double legacy_tv_growth_rate = 0.0;
  long evaluations = 0;
};

SingleRates single_solution_rates(const ModelPtr& model,
                                  const DomainSlab& slab,
                                  const SamplingSpec& spec = {});

/// Rates entering the two-solution stability bound. Three domains matter:
/// the first solution's slab (its own support union and value range), the
/// joint slab covering both solutions, and the ambient slab whose space is
/// the whole computational box (the finite stand-in for free space).
struct PairRates {
  /// sup |d source_a / du| over the joint slab (contraction exponent).
  double source_growth_rate = 0.0;
  /// (2N+1) * flux_u_grad_sup + source_growth_rate.
  double mixed_growth_rate = 0.0;
  /// Older combined rate 2N * flux_u_grad_sup + source_growth_rate +
  /// source_difference_u_sup, kept for side-by-side reporting.
  double legacy_stability_rate = 0.0;
  /// sup Euclidean norm of d(flux_a - flux_b)/du over the first slab.
  double flux_difference_rate = 0.0;
  /// sup Euclidean norm of d flux_b / du over the ambient slab; bounds the
  /// propagation speed used for the shrinking balls.
  double propagation_speed = 0.0;
  /// sup max-abs entry of the gradient of d flux_a / du, first slab.
  double flux_u_grad_sup = 0.0;
  /// sup |d (source_a - source_b) / du| over the joint slab.
  double source_difference_u_sup = 0.0;
  long evaluations = 0;
};

PairRates pair_rates(const ModelPtr& model, const ModelPtr& other,
                     const DomainSlab& first_slab, const DomainSlab& joint_slab,
                     const DomainSlab& ambient_slab,
                     const SamplingSpec& spec = {});

/// sup Euclidean norm of d flux / du over the slab.
double propagation_speed(const ModelPtr& model, const DomainSlab& slab,
                         const SamplingSpec& spec = {});

/// Observables reduced to scalars for the sampler; the model pointer is
/// captured, so it must outlive the returned callable.
SlabFn source_u_magnitude(ModelPtr model);
SlabFn flux_u_grad_max_entry(ModelPtr model);
SlabFn flux_u_magnitude(ModelPtr model);

}  // namespace balaw
