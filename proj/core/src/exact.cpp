#include "balaw/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "balaw/functionals.hpp"

namespace balaw {
namespace {

double bump_value(std::span<const double> x, const std::vector<double>& center,
                  double radius, double amplitude) {
  double sum = 0.0;
  for (size_t d = 0; d < x.size(); ++d) {
    const double delta = x[d] - center[d];
    sum += delta * delta;
  }
  const double s = std::sqrt(sum) / radius;
  if (s >= 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * s);
  return amplitude * c * c;
}

void require_1d(int dimension, const std::string& id) {
  if (dimension != 1) {
    throw std::invalid_argument("exact solution '" + id + "' is 1D only");
  }
}

void require_valid_time(double t, double valid_until, const std::string& id) {
  if (t > valid_until) {
    throw std::invalid_argument("exact solution '" + id +
                                "' is only valid up to t=" +
                                std::to_string(valid_until));
  }
}

}  // namespace

ScalarField ExactSolution::sample(const GridPtr& grid, double t) const {
  require_valid_time(t, valid_until, id);
  std::vector<double> values(static_cast<size_t>(grid->cell_count()));
  std::vector<double> x(static_cast<size_t>(grid->dimension()));
  for (std::int64_t c = 0; c < grid->cell_count(); ++c) {
    grid->cell_center(c, x);
    values[static_cast<size_t>(c)] = evaluate(t, x);
  }
  return ScalarField(grid, std::move(values));
}

ExactSolution make_exact_solution(int dimension, const std::string& id,
                                  const Params& params) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  const double infinity = std::numeric_limits<double>::infinity();
  if (id == "advection") {
    require_known_keys("exact", id, params,
                       {"speed", "amplitude", "center", "radius"});
    auto speed = param_vector(params, "speed", dimension, 1.0);
    auto center = param_vector(params, "center", dimension, 0.0);
    const double radius = param_scalar(params, "radius", 1.0);
    const double amplitude = param_scalar(params, "amplitude", 1.0);
    return {id, infinity,
            [=](double t, std::span<const double> x) {
              std::vector<double> shifted(x.size());
              for (size_t d = 0; d < x.size(); ++d) {
                shifted[d] = x[d] - speed[d] * t;
              }
              return bump_value(shifted, center, radius, amplitude);
            }};
  }
  if (id == "burgers_shock") {
    require_1d(dimension, id);
    require_known_keys("exact", id, params,
                       {"left_value", "left_edge", "jump_at", "scale"});
    const double height = param_scalar(params, "left_value", 1.0);
    const double left_edge = param_scalar(params, "left_edge", -1.5);
    const double jump_at = param_scalar(params, "jump_at", 0.0);
    const double scale = param_scalar(params, "scale", 1.0);
    if (height <= 0.0 || scale <= 0.0 || left_edge >= jump_at) {
      throw std::invalid_argument(
          "exact 'burgers_shock': needs left_value > 0, scale > 0, "
          "left_edge < jump_at");
    }
    const double valid = 2.0 * (jump_at - left_edge) / (scale * height);
    return {id, valid,
            [=](double t, std::span<const double> x) -> double {
              require_valid_time(t, valid, id);
              const double shock = jump_at + 0.5 * scale * height * t;
              if (x[0] >= shock) return 0.0;
              if (t <= 0.0) return x[0] >= left_edge ? height : 0.0;
              const double fan = (x[0] - left_edge) / (scale * t);
              return std::clamp(fan, 0.0, height);
            }};
  }
  if (id == "burgers_rarefaction") {
    require_1d(dimension, id);
    require_known_keys("exact", id, params,
                       {"right_value", "jump_at", "right_edge", "scale"});
    const double height = param_scalar(params, "right_value", 1.0);
    const double jump_at = param_scalar(params, "jump_at", 0.0);
    const double right_edge = param_scalar(params, "right_edge", 1.5);
    const double scale = param_scalar(params, "scale", 1.0);
    if (height <= 0.0 || scale <= 0.0 || jump_at >= right_edge) {
      throw std::invalid_argument(
          "exact 'burgers_rarefaction': needs right_value > 0, scale > 0, "
          "jump_at < right_edge");
    }
    const double valid = 2.0 * (right_edge - jump_at) / (scale * height);
    return {id, valid,
            [=](double t, std::span<const double> x) -> double {
              require_valid_time(t, valid, id);
              const double shock = right_edge + 0.5 * scale * height * t;
              if (x[0] >= shock || x[0] <= jump_at) return 0.0;
              if (t <= 0.0) return x[0] <= right_edge ? height : 0.0;
              const double fan = (x[0] - jump_at) / (scale * t);
              return std::clamp(fan, 0.0, height);
            }};
  }
  if (id == "source_decay") {
    require_known_keys("exact", id, params,
                       {"rate", "amplitude", "center", "radius"});
    const double rate = param_scalar(params, "rate", -1.0);
    auto center = param_vector(params, "center", dimension, 0.0);
    const double radius = param_scalar(params, "radius", 1.0);
    const double amplitude = param_scalar(params, "amplitude", 1.0);
    return {id, infinity,
            [=](double t, std::span<const double> x) {
              return std::exp(rate * t) *
                     bump_value(x, center, radius, amplitude);
            }};
  }
  throw std::invalid_argument("unknown exact solution '" + id + "'");
}

ConvergenceStudy convergence_study(const ModelPtr& model,
                                   const ExactSolution& exact,
                                   const Box& domain, std::int64_t base_cells,
                                   int level_count, const SolverConfig& config) {
  if (level_count < 2) {
    throw std::invalid_argument("convergence needs at least 2 levels");
  }
  if (config.end_time > exact.valid_until) {
    throw std::invalid_argument("study runs past the reference validity");
  }
  ConvergenceStudy study;
  for (int level = 0; level < level_count; ++level) {
    std::vector<std::int64_t> cells(static_cast<size_t>(domain.dimension()),
                                    base_cells << level);
    GridPtr grid = make_grid(domain, cells);
    const ScalarField initial = exact.sample(grid, 0.0);
    Trajectory run = solve(model, initial, config);
    const ScalarField reference = exact.sample(grid, config.end_time);
    study.levels.push_back({base_cells << level, grid->spacing(),
                            l1_distance(run.snapshots.back(), reference)});
  }
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
  const double count = static_cast<double>(study.levels.size());
  for (const ConvergenceLevel& level : study.levels) {
    const double x = std::log(level.spacing);
    const double y = std::log(std::max(level.l1_error, 1e-300));
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    sum_xy += x * y;
  }
  study.order = (count * sum_xy - sum_x * sum_y) /
                (count * sum_xx - sum_x * sum_x);
  return study;
}

double front_position(const ScalarField& u, double level) {
  const Grid& grid = u.grid();
  if (grid.dimension() != 1) {
    throw std::invalid_argument("front_position is 1D only");
  }
  for (std::int64_t c = grid.cell_count() - 1; c >= 0; --c) {
    if (u[c] >= level) return grid.center(0, c);
  }
  throw std::runtime_error("no cell reaches the front level");
}

std::vector<std::string> exact_catalog() {
  return {"advection", "burgers_shock", "burgers_rarefaction", "source_decay"};
}

}  // namespace balaw
