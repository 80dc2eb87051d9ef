#pragma once

#include <string>
#include <vector>

#include "balaw/grid.hpp"
#include "balaw/model.hpp"

namespace balaw {

enum class SourceIntegrator { euler, heun };

/// First-order finite-volume scheme: per-axis local Lax-Friedrichs fluxes,
/// explicit time stepping, zero ghost states outside the grid. The domain
/// must be large enough that the solution never reaches the boundary ring;
/// the solver enforces this instead of silently absorbing outflow.
struct SolverConfig {
  double end_time = 1.0;
  /// Uniform snapshot spacing when snapshot_times is empty.
  int snapshot_count = 32;
  /// Explicit snapshot times in (0, end_time]; 0 and end_time are added.
  std::vector<double> snapshot_times;
  double cfl = 0.45;
  SourceIntegrator source_integrator = SourceIntegrator::euler;
  /// Sample count for the face dissipation speed between two states.
  int dissipation_samples = 9;
  /// Boundary-ring tolerance relative to the initial sup norm.
  double boundary_threshold_rel = 1e-12;
  long max_steps = 20'000'000;

  void validate() const;
};

struct SolverDiagnostics {
  long steps = 0;
  double smallest_dt = 0.0;
  double largest_speed = 0.0;
  double largest_boundary_value = 0.0;
  /// Per-step records, index-aligned.
  std::vector<double> dt_history;
  std::vector<double> speed_history;
};

struct Trajectory {
  GridPtr grid;
  /// snapshot_count + 1 times from 0 to end_time, hit exactly.
  std::vector<double> times;
  std::vector<ScalarField> snapshots;
  SolverDiagnostics diagnostics;
};

Trajectory solve(const ModelPtr& model, const ScalarField& initial,
                 const SolverConfig& config);

/// Advances two solutions in lockstep with a common step size (the smaller
/// of the two stability bounds), so discrete difference functionals compare
/// states at identical times.
struct PairTrajectories {
  Trajectory first;
  Trajectory second;
};

PairTrajectories solve_pair(const ModelPtr& first_model,
                            const ScalarField& first_initial,
                            const ModelPtr& second_model,
                            const ScalarField& second_initial,
                            const SolverConfig& config);

}  // namespace balaw
