#include "balaw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace balaw {
namespace {

/// Semi-discrete right-hand side for one solution: per-axis local
/// Lax-Friedrichs flux divergence plus pointwise source, with zero ghost
/// states beyond the grid. prepare() fills the divergence and source arrays
/// for a state and records the largest face speed and source rate, so the
/// caller can pick a stable step before applying it.
class SemiDiscrete {
 public:
  SemiDiscrete(ModelPtr model, GridPtr grid, const SolverConfig& config)
      : model_(std::move(model)),
        grid_(std::move(grid)),
        samples_(config.dissipation_samples),
        integrator_(config.source_integrator) {
    const size_t n = static_cast<size_t>(grid_->dimension());
    const size_t count = static_cast<size_t>(grid_->cell_count());
    divergence_.resize(count);
    source_.resize(count);
    right_flux_.resize(count);
    predictor_.resize(count);
    flux_buffer_.resize(n);
    speed_buffer_.resize(n);
    index_.resize(n);
    point_.resize(n);
    collect_boundary_ring();
  }

  void prepare(double t, const std::vector<double>& values) {
    std::fill(divergence_.begin(), divergence_.end(), 0.0);
    max_speed_ = 0.0;
    for (int axis = 0; axis < grid_->dimension(); ++axis) {
      axis_sweep(t, values, axis);
    }
    max_source_rate_ = 0.0;
    if (model_->source_is_zero()) {
      std::fill(source_.begin(), source_.end(), 0.0);
    } else {
      for_each_cell([&](std::int64_t c) {
        source_[static_cast<size_t>(c)] = model_->source(t, point_, values[static_cast<size_t>(c)]);
        max_source_rate_ = std::max(
            max_source_rate_,
            std::abs(model_->source_u(t, point_, values[static_cast<size_t>(c)])));
      });
    }
  }

  double max_speed() const { return max_speed_; }
  double max_source_rate() const { return max_source_rate_; }

  /// Applies the prepared right-hand side over one step of size dt.
  void advance(double t, double dt, std::vector<double>& values) {
    const size_t count = values.size();
    if (integrator_ == SourceIntegrator::heun && !model_->source_is_zero()) {
      for (size_t c = 0; c < count; ++c) {
        predictor_[c] = values[c] + dt * (source_[c] - divergence_[c]);
      }
      for_each_cell([&](std::int64_t flat) {
        const size_t c = static_cast<size_t>(flat);
        const double late = model_->source(t + dt, point_, predictor_[c]);
        values[c] += dt * (-divergence_[c] + 0.5 * (source_[c] + late));
      });
      return;
    }
    for (size_t c = 0; c < count; ++c) {
      values[c] += dt * (source_[c] - divergence_[c]);
    }
  }

  /// Largest |value| on the outermost cell layer.
  double boundary_magnitude(const std::vector<double>& values) const {
    double worst = 0.0;
    for (std::int64_t c : ring_) {
      worst = std::max(worst, std::abs(values[static_cast<size_t>(c)]));
    }
    return worst;
  }

 private:
  /// Lexicographic cell loop keeping index_ and point_ in sync.
  template <typename Body>
  void for_each_cell(Body body) {
    const int n = grid_->dimension();
    std::fill(index_.begin(), index_.end(), 0);
    for (int d = 0; d < n; ++d) point_[static_cast<size_t>(d)] = grid_->center(d, 0);
    const std::int64_t count = grid_->cell_count();
    for (std::int64_t c = 0; c < count; ++c) {
      body(c);
      int d = n;
      while (d > 0) {
        --d;
        auto& i = index_[static_cast<size_t>(d)];
        if (++i < grid_->cells()[static_cast<size_t>(d)]) {
          point_[static_cast<size_t>(d)] = grid_->center(d, i);
          break;
        }
        i = 0;
        point_[static_cast<size_t>(d)] = grid_->center(d, 0);
      }
    }
  }

  /// Local Lax-Friedrichs flux through the face at x_face between states
  /// left and right along `axis`, with the dissipation speed sampled across
  /// the state interval. Also feeds the global speed estimate.
  double face_flux(double t, double left, double right, int axis) {
    model_->flux(t, point_, left, flux_buffer_);
    const double flux_left = flux_buffer_[static_cast<size_t>(axis)];
    model_->flux(t, point_, right, flux_buffer_);
    const double flux_right = flux_buffer_[static_cast<size_t>(axis)];
    const double lo = std::min(left, right);
    const double hi = std::max(left, right);
    double speed = 0.0;
    for (int s = 0; s < samples_; ++s) {
      const double u =
          lo + (hi - lo) * static_cast<double>(s) /
                   static_cast<double>(samples_ - 1);
      model_->flux_u(t, point_, u, speed_buffer_);
      speed = std::max(speed, std::abs(speed_buffer_[static_cast<size_t>(axis)]));
    }
    max_speed_ = std::max(max_speed_, speed);
    return 0.5 * (flux_left + flux_right) - 0.5 * speed * (right - left);
  }

  void axis_sweep(double t, const std::vector<double>& values, int axis) {
    const double h = grid_->spacing();
    const std::int64_t stride = grid_->stride(axis);
    const std::int64_t last = grid_->cells()[static_cast<size_t>(axis)] - 1;
    const double inv_h = 1.0 / h;
    for_each_cell([&](std::int64_t c) {
      const size_t cell = static_cast<size_t>(c);
      const std::int64_t along = index_[static_cast<size_t>(axis)];
      const double here = values[cell];
      const double center = point_[static_cast<size_t>(axis)];
      double left_face;
      if (along == 0) {
        point_[static_cast<size_t>(axis)] = center - 0.5 * h;
        left_face = face_flux(t, 0.0, here, axis);
      } else {
        left_face = right_flux_[static_cast<size_t>(c - stride)];
      }
      const double neighbor =
          along == last ? 0.0 : values[static_cast<size_t>(c + stride)];
      point_[static_cast<size_t>(axis)] = center + 0.5 * h;
      const double right_face = face_flux(t, here, neighbor, axis);
      point_[static_cast<size_t>(axis)] = center;
      right_flux_[cell] = right_face;
      divergence_[cell] += (right_face - left_face) * inv_h;
    });
  }

  void collect_boundary_ring() {
    const int n = grid_->dimension();
    std::vector<std::int64_t> idx(static_cast<size_t>(n), 0);
    const std::int64_t count = grid_->cell_count();
    for (std::int64_t c = 0; c < count; ++c) {
      grid_->unflatten(c, idx);
      for (int d = 0; d < n; ++d) {
        if (idx[static_cast<size_t>(d)] == 0 ||
            idx[static_cast<size_t>(d)] ==
                grid_->cells()[static_cast<size_t>(d)] - 1) {
          ring_.push_back(c);
          break;
        }
      }
    }
  }

  ModelPtr model_;
  GridPtr grid_;
  int samples_;
  SourceIntegrator integrator_;
  std::vector<double> divergence_;
  std::vector<double> source_;
  std::vector<double> right_flux_;
  std::vector<double> predictor_;
  std::vector<double> flux_buffer_;
  std::vector<double> speed_buffer_;
  std::vector<std::int64_t> index_;
  std::vector<double> point_;
  std::vector<std::int64_t> ring_;
  double max_speed_ = 0.0;
  double max_source_rate_ = 0.0;
};

std::vector<double> snapshot_times(const SolverConfig& config) {
  std::vector<double> times;
  if (config.snapshot_times.empty()) {
    times.reserve(static_cast<size_t>(config.snapshot_count) + 1);
    for (int k = 0; k <= config.snapshot_count; ++k) {
      times.push_back(config.end_time * static_cast<double>(k) /
                      static_cast<double>(config.snapshot_count));
    }
    times.back() = config.end_time;
    return times;
  }
  times.push_back(0.0);
  for (double t : config.snapshot_times) {
    if (t <= times.back() || t > config.end_time) {
      throw std::invalid_argument(
          "snapshot_times must increase strictly within (0, end_time]");
    }
    times.push_back(t);
  }
  if (times.back() < config.end_time) times.push_back(config.end_time);
  return times;
}

double stable_dt(const SemiDiscrete& scheme, double h, int dimension,
                 const SolverConfig& config) {
  const double speed = scheme.max_speed();
  double dt = speed > 0.0 ? config.cfl * h / (static_cast<double>(dimension) * speed)
                          : config.cfl * h;
  const double rate = scheme.max_source_rate();
  if (rate > 0.0) dt = std::min(dt, 0.5 / rate);
  return dt;
}

struct Lane {
  ModelPtr model;
  std::vector<double> values;
  SemiDiscrete scheme;
  double threshold;
  Trajectory trajectory;

  Lane(const ModelPtr& m, const ScalarField& initial, const SolverConfig& config)
      : model(m),
        values(initial.values().begin(), initial.values().end()),
        scheme(m, initial.grid_ptr(), config),
        threshold(config.boundary_threshold_rel * initial.max_abs()) {
    trajectory.grid = initial.grid_ptr();
  }

  void check_boundary(double t) {
    const double magnitude = scheme.boundary_magnitude(values);
    trajectory.diagnostics.largest_boundary_value =
        std::max(trajectory.diagnostics.largest_boundary_value, magnitude);
    if (magnitude > threshold) {
      std::ostringstream message;
      message.precision(6);
      message << "solution for model '" << model->name()
              << "' reached the domain boundary at t=" << t << " (|u|="
              << magnitude << " > " << threshold
              << "); enlarge the spatial domain";
      throw std::runtime_error(message.str());
    }
  }

  void record(double t) {
    trajectory.times.push_back(t);
    trajectory.snapshots.emplace_back(trajectory.grid, values);
  }
};

/// Shared driver: advances every lane with the common stable step.
void run_lanes(std::span<Lane*> lanes, const SolverConfig& config) {
  config.validate();
  const GridPtr& grid = lanes[0]->trajectory.grid;
  for (Lane* lane : lanes) {
    if (lane->model->dimension() != grid->dimension()) {
      throw std::invalid_argument("model dimension does not match the grid");
    }
    if (*lane->trajectory.grid != *grid) {
      throw std::invalid_argument("paired solves need one shared grid");
    }
  }
  const double h = grid->spacing();
  const int n = grid->dimension();
  const std::vector<double> times = snapshot_times(config);

  for (Lane* lane : lanes) {
    lane->check_boundary(0.0);
    lane->record(0.0);
  }
  double t = 0.0;
  long steps = 0;
  double smallest_dt = config.end_time;
  double largest_speed = 0.0;
  std::vector<double> dt_history;
  std::vector<double> speed_history;
  for (size_t k = 1; k < times.size(); ++k) {
    const double target = times[k];
    while (t < target) {
      double dt = target - t;
      double step_speed = 0.0;
      for (Lane* lane : lanes) {
        lane->scheme.prepare(t, lane->values);
        dt = std::min(dt, stable_dt(lane->scheme, h, n, config));
        step_speed = std::max(step_speed, lane->scheme.max_speed());
      }
      const bool final_step = dt >= target - t;
      if (final_step) dt = target - t;
      for (Lane* lane : lanes) {
        lane->scheme.advance(t, dt, lane->values);
      }
      t = final_step ? target : t + dt;
      for (Lane* lane : lanes) lane->check_boundary(t);
      smallest_dt = std::min(smallest_dt, dt);
      largest_speed = std::max(largest_speed, step_speed);
      dt_history.push_back(dt);
      speed_history.push_back(step_speed);
      if (++steps > config.max_steps) {
        throw std::runtime_error("step budget exceeded; the flow may be "
                                 "stalled by a vanishing stable step");
      }
    }
    for (Lane* lane : lanes) lane->record(target);
  }
  for (Lane* lane : lanes) {
    lane->trajectory.diagnostics.steps = steps;
    lane->trajectory.diagnostics.smallest_dt = smallest_dt;
    lane->trajectory.diagnostics.largest_speed = largest_speed;
    lane->trajectory.diagnostics.dt_history = dt_history;
    lane->trajectory.diagnostics.speed_history = speed_history;
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(end_time > 0.0)) throw std::invalid_argument("end_time must be > 0");
  if (snapshot_count < 1) {
    throw std::invalid_argument("snapshot_count must be >= 1");
  }
  if (!(cfl > 0.0) || cfl > 1.0) {
    throw std::invalid_argument("cfl must be in (0, 1]");
  }
  if (dissipation_samples < 2) {
    throw std::invalid_argument("dissipation_samples must be >= 2");
  }
  if (boundary_threshold_rel < 0.0) {
    throw std::invalid_argument("boundary_threshold_rel must be >= 0");
  }
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

Trajectory solve(const ModelPtr& model, const ScalarField& initial,
                 const SolverConfig& config) {
  if (!model) throw std::invalid_argument("null model");
  Lane lane(model, initial, config);
  Lane* lanes[] = {&lane};
  run_lanes(lanes, config);
  return std::move(lane.trajectory);
}

PairTrajectories solve_pair(const ModelPtr& first_model,
                            const ScalarField& first_initial,
                            const ModelPtr& second_model,
                            const ScalarField& second_initial,
                            const SolverConfig& config) {
  if (!first_model || !second_model) {
    throw std::invalid_argument("null model");
  }
  Lane first(first_model, first_initial, config);
  Lane second(second_model, second_initial, config);
  Lane* lanes[] = {&first, &second};
  run_lanes(lanes, config);
  return {std::move(first.trajectory), std::move(second.trajectory)};
}

}  // namespace balaw
