#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "balaw/model.hpp"

namespace balaw {

/// Parameter map for catalog entries. Scalar parameters are single-element
/// vectors; per-axis parameters are broadcast from one element when needed.
using Params = std::map<std::string, std::vector<double>>;

double param_scalar(const Params& params, const std::string& key,
                    double fallback);
std::vector<double> param_vector(const Params& params, const std::string& key,
                                 int dimension, double fallback);
/// Rejects typos: every key in `params` must appear in `allowed`.
void require_known_keys(const std::string& kind, const std::string& id,
                        const Params& params,
                        const std::set<std::string>& allowed);

/// Builds a balance-law model from a flux and a source catalog entry.
///
/// Fluxes:
///   zero                 f = 0
///   advection            f_d = speed_d u                     [speed]
///   burgers              f_d = scale_d u^2 / 2               [scale]
///   variable_advection   f_d = a_d(x) u with
///                        a_d(x) = base_d + amplitude_d *
///                                 sin(wavenumber_d x_{(d+1) mod N} + phase_d)
///                        (1D: varies along its own axis; N >= 2: each
///                        component varies along the next axis, so the
///                        velocity field is divergence-free)
/// Sources:
///   none                 F = 0
///   linear               F = rate u                          [rate]
///   gaussian             F = amplitude exp(-|x-center|^2/width^2)
///   gaussian_linear      F = rate u exp(-|x-center|^2/width^2)
///   coordinate           F = slope x_axis                    [slope, axis]
ModelPtr make_model(int dimension, const std::string& flux_id,
                    const Params& flux_params, const std::string& source_id,
                    const Params& source_params);

/// Initial data catalog:
///   bump        amplitude cos^2(pi |x-center| / (2 radius)) inside the ball
///   indicator   amplitude on the box [lo, hi]
std::function<double(std::span<const double>)> make_initial_data(
    int dimension, const std::string& id, const Params& params);

std::vector<std::string> flux_catalog();
std::vector<std::string> source_catalog();
std::vector<std::string> initial_catalog();

}  // namespace balaw
