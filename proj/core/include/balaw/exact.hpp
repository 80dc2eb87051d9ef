#pragma once

#include <functional>
#include <string>
#include <vector>

#include "balaw/catalog.hpp"
#include "balaw/solver.hpp"

namespace balaw {

/// Closed-form reference solution. Evaluation throws past valid_until, where
/// the closed form stops describing the entropy solution (for example once a
/// rarefaction fan catches up with its shock).
struct ExactSolution {
  std::string id;
  double valid_until = 0.0;
  std::function<double(double t, std::span<const double> x)> evaluate;

  ScalarField sample(const GridPtr& grid, double t) const;
};

/// Reference solutions:
///   advection            bump translated with constant speed
///                        [speed, amplitude, center, radius]
///   burgers_shock        box data: fan from the left edge chasing the
///                        front shock    [left_value, left_edge, jump_at,
///                        scale]; valid until the fan reaches the shock
///   burgers_rarefaction  box data: fan at the left, shock from the right
///                        edge           [right_value, jump_at, right_edge,
///                        scale]; same validity rule
///   source_decay         bump scaled by exp(rate t), zero flux
///                        [rate, amplitude, center, radius]
/// The matching models come from the flux/source catalog; pairing a study
/// with a different model is the caller's mistake and shows up as stalled
/// convergence.
ExactSolution make_exact_solution(int dimension, const std::string& id,
                                  const Params& params);

struct ConvergenceLevel {
  std::int64_t cells_per_axis = 0;
  double spacing = 0.0;
  double l1_error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  /// Least-squares slope of log(error) against log(spacing).
  double order = 0.0;
};

/// Runs the scheme against the reference on `level_count` dyadic grids
/// starting from base_cells per axis, measuring the final-time L1 gap from
/// the cell-center sampled reference.
ConvergenceStudy convergence_study(const ModelPtr& model,
                                   const ExactSolution& exact,
                                   const Box& domain, std::int64_t base_cells,
                                   int level_count, const SolverConfig& config);

/// Largest cell center whose value clears `level`; locates a 1D front.
double front_position(const ScalarField& u, double level);

std::vector<std::string> exact_catalog();

}  // namespace balaw
