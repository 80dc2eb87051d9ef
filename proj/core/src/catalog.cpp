#include "balaw/catalog.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace balaw {

void require_known_keys(const std::string& kind, const std::string& id,
                        const Params& params,
                        const std::set<std::string>& allowed) {
  for (const auto& [key, value] : params) {
    if (!allowed.count(key)) {
      throw std::invalid_argument(kind + " '" + id + "': unknown parameter '" +
                                  key + "'");
    }
    if (value.empty()) {
      throw std::invalid_argument(kind + " '" + id + "': parameter '" + key +
                                  "' is empty");
    }
  }
}

double param_scalar(const Params& params, const std::string& key,
                    double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second.size() != 1) {
    throw std::invalid_argument("parameter '" + key + "' must be a scalar");
  }
  return it->second[0];
}

std::vector<double> param_vector(const Params& params, const std::string& key,
                                 int dimension, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) {
    return std::vector<double>(static_cast<size_t>(dimension), fallback);
  }
  const auto& raw = it->second;
  if (raw.size() == 1) {
    return std::vector<double>(static_cast<size_t>(dimension), raw[0]);
  }
  if (raw.size() != static_cast<size_t>(dimension)) {
    throw std::invalid_argument("parameter '" + key + "' needs 1 or " +
                                std::to_string(dimension) + " entries, got " +
                                std::to_string(raw.size()));
  }
  return raw;
}

namespace {

double squared_distance(std::span<const double> x,
                        const std::vector<double>& center) {
  double sum = 0.0;
  for (size_t d = 0; d < x.size(); ++d) {
    const double delta = x[d] - center[d];
    sum += delta * delta;
  }
  return sum;
}

/// Analytic ingredients of one flux entry. grad_div is the spatial gradient
/// of div f at fixed u; the model combines it with the source gradient into
/// the balance gradient.
struct FluxSpec {
  VectorFn flux;
  VectorFn flux_u;
  MatrixFn flux_u_grad;
  ScalarFn flux_div;
  VectorFn grad_div;
};

FluxSpec make_flux(int dimension, const std::string& id, const Params& params) {
  const size_t n = static_cast<size_t>(dimension);
  if (id == "zero") {
    require_known_keys("flux", id, params, {});
    auto zero_vec = [](double, std::span<const double>, double,
                       std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
    };
    return {zero_vec, zero_vec,
            [](double, std::span<const double>, double, std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
            },
            [](double, std::span<const double>, double) { return 0.0; },
            zero_vec};
  }
  if (id == "advection") {
    require_known_keys("flux", id, params, {"speed"});
    auto speed = param_vector(params, "speed", dimension, 1.0);
    return {[speed](double, std::span<const double>, double u,
                    std::span<double> out) {
              for (size_t d = 0; d < out.size(); ++d) out[d] = speed[d] * u;
            },
            [speed](double, std::span<const double>, double,
                    std::span<double> out) {
              std::copy(speed.begin(), speed.end(), out.begin());
            },
            [](double, std::span<const double>, double, std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
            },
            [](double, std::span<const double>, double) { return 0.0; },
            [](double, std::span<const double>, double, std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
            }};
  }
  if (id == "burgers") {
    require_known_keys("flux", id, params, {"scale"});
    auto scale = param_vector(params, "scale", dimension, 1.0);
    return {[scale](double, std::span<const double>, double u,
                    std::span<double> out) {
              for (size_t d = 0; d < out.size(); ++d) {
                out[d] = 0.5 * scale[d] * u * u;
              }
            },
            [scale](double, std::span<const double>, double u,
                    std::span<double> out) {
              for (size_t d = 0; d < out.size(); ++d) out[d] = scale[d] * u;
            },
            [](double, std::span<const double>, double, std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
            },
            [](double, std::span<const double>, double) { return 0.0; },
            [](double, std::span<const double>, double, std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
            }};
  }
  if (id == "variable_advection") {
    require_known_keys("flux", id, params, {"base", "amplitude", "wavenumber", "phase"});
    auto base = param_vector(params, "base", dimension, 0.0);
    auto amplitude = param_vector(params, "amplitude", dimension, 1.0);
    auto wavenumber = param_vector(params, "wavenumber", dimension, 1.0);
    auto phase = param_vector(params, "phase", dimension, 0.0);
    auto partner = [n](size_t d) { return (d + 1) % n; };
    auto component = [=](std::span<const double> x, size_t d) {
      return base[d] + amplitude[d] *
                           std::sin(wavenumber[d] * x[partner(d)] + phase[d]);
    };
    // div f = u * sum_d d/dx_d a_d(x); the sum only picks up components whose
    // partner axis is their own, which happens exactly in one dimension.
    auto divergence_rate = [=](std::span<const double> x) {
      double rate = 0.0;
      for (size_t d = 0; d < n; ++d) {
        if (partner(d) != d) continue;
        rate += amplitude[d] * wavenumber[d] *
                std::cos(wavenumber[d] * x[d] + phase[d]);
      }
      return rate;
    };
    return {[component](double, std::span<const double> x, double u,
                        std::span<double> out) {
              for (size_t d = 0; d < out.size(); ++d) {
                out[d] = component(x, d) * u;
              }
            },
            [component](double, std::span<const double> x, double,
                        std::span<double> out) {
              for (size_t d = 0; d < out.size(); ++d) out[d] = component(x, d);
            },
            [=](double, std::span<const double> x, double,
                std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
              for (size_t d = 0; d < n; ++d) {
                out[d * n + partner(d)] =
                    amplitude[d] * wavenumber[d] *
                    std::cos(wavenumber[d] * x[partner(d)] + phase[d]);
              }
            },
            [divergence_rate](double, std::span<const double> x, double u) {
              return divergence_rate(x) * u;
            },
            [=](double, std::span<const double> x, double u,
                std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
              for (size_t d = 0; d < n; ++d) {
                if (partner(d) != d) continue;
                out[d] -= u * amplitude[d] * wavenumber[d] * wavenumber[d] *
                          std::sin(wavenumber[d] * x[d] + phase[d]);
              }
            }};
  }
  throw std::invalid_argument("unknown flux '" + id + "'");
}

/// Analytic ingredients of one source entry; grad is the spatial gradient of
/// F at fixed u.
struct SourceSpec {
  ScalarFn source;
  ScalarFn source_u;
  VectorFn grad;
  bool is_zero = false;
};

SourceSpec make_source(int dimension, const std::string& id,
                       const Params& params) {
  if (id == "none") {
    require_known_keys("source", id, params, {});
    return {[](double, std::span<const double>, double) { return 0.0; },
            [](double, std::span<const double>, double) { return 0.0; },
            [](double, std::span<const double>, double, std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
            },
            true};
  }
  if (id == "linear") {
    require_known_keys("source", id, params, {"rate"});
    const double rate = param_scalar(params, "rate", -1.0);
    return {[rate](double, std::span<const double>, double u) {
              return rate * u;
            },
            [rate](double, std::span<const double>, double) { return rate; },
            [](double, std::span<const double>, double, std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
            },
            false};
  }
  if (id == "gaussian" || id == "gaussian_linear") {
    require_known_keys("source", id, params, {"amplitude", "rate", "width", "center"});
    const bool linear = (id == "gaussian_linear");
    const double strength = linear ? param_scalar(params, "rate", -1.0)
                                   : param_scalar(params, "amplitude", 1.0);
    const double width = param_scalar(params, "width", 1.0);
    if (width <= 0.0) {
      throw std::invalid_argument("source '" + id + "': width must be > 0");
    }
    auto center = param_vector(params, "center", dimension, 0.0);
    auto profile = [width, center](std::span<const double> x) {
      return std::exp(-squared_distance(x, center) / (width * width));
    };
    return {[=](double, std::span<const double> x, double u) {
              return strength * (linear ? u : 1.0) * profile(x);
            },
            [=](double, std::span<const double> x, double) {
              return linear ? strength * profile(x) : 0.0;
            },
            [=](double, std::span<const double> x, double u,
                std::span<double> out) {
              const double value = strength * (linear ? u : 1.0) * profile(x);
              for (size_t d = 0; d < out.size(); ++d) {
                out[d] = value * (-2.0 * (x[d] - center[d]) / (width * width));
              }
            },
            false};
  }
  if (id == "coordinate") {
    require_known_keys("source", id, params, {"slope", "axis"});
    const double slope = param_scalar(params, "slope", 1.0);
    const int axis = static_cast<int>(param_scalar(params, "axis", 0.0));
    if (axis < 0 || axis >= dimension) {
      throw std::invalid_argument("source 'coordinate': axis out of range");
    }
    return {[slope, axis](double, std::span<const double> x, double) {
              return slope * x[static_cast<size_t>(axis)];
            },
            [](double, std::span<const double>, double) { return 0.0; },
            [slope, axis](double, std::span<const double>, double,
                          std::span<double> out) {
              std::fill(out.begin(), out.end(), 0.0);
              out[static_cast<size_t>(axis)] = slope;
            },
            false};
  }
  throw std::invalid_argument("unknown source '" + id + "'");
}

}  // namespace

ModelPtr make_model(int dimension, const std::string& flux_id,
                    const Params& flux_params, const std::string& source_id,
                    const Params& source_params) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  FluxSpec flux = make_flux(dimension, flux_id, flux_params);
  SourceSpec source = make_source(dimension, source_id, source_params);

  BalanceLawModel::Parts parts;
  parts.dimension = dimension;
  parts.name = flux_id + "+" + source_id;
  parts.flux = flux.flux;
  parts.source = source.source;
  parts.source_is_zero = source.is_zero;
  parts.flux_u = flux.flux_u;
  parts.flux_u_grad = flux.flux_u_grad;
  parts.source_u = source.source_u;
  parts.flux_div = flux.flux_div;
  auto source_grad = source.grad;
  auto flux_grad_div = flux.grad_div;
  parts.balance_gradient = [source_grad, flux_grad_div](
                               double t, std::span<const double> x, double u,
                               std::span<double> out) {
    source_grad(t, x, u, out);
    std::vector<double> div_part(out.size());
    flux_grad_div(t, x, u, div_part);
    for (size_t d = 0; d < out.size(); ++d) out[d] -= div_part[d];
  };
  return std::make_shared<BalanceLawModel>(std::move(parts));
}

std::function<double(std::span<const double>)> make_initial_data(
    int dimension, const std::string& id, const Params& params) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (id == "bump") {
    require_known_keys("initial", id, params, {"amplitude", "center", "radius"});
    const double amplitude = param_scalar(params, "amplitude", 1.0);
    const double radius = param_scalar(params, "radius", 1.0);
    if (radius <= 0.0) {
      throw std::invalid_argument("initial 'bump': radius must be > 0");
    }
    auto center = param_vector(params, "center", dimension, 0.0);
    return [=](std::span<const double> x) {
      const double s = std::sqrt(squared_distance(x, center)) / radius;
      if (s >= 1.0) return 0.0;
      const double c = std::cos(0.5 * std::numbers::pi * s);
      return amplitude * c * c;
    };
  }
  if (id == "indicator") {
    require_known_keys("initial", id, params, {"amplitude", "lo", "hi"});
    const double amplitude = param_scalar(params, "amplitude", 1.0);
    auto lo = param_vector(params, "lo", dimension, -1.0);
    auto hi = param_vector(params, "hi", dimension, 1.0);
    for (size_t d = 0; d < lo.size(); ++d) {
      if (lo[d] >= hi[d]) {
        throw std::invalid_argument("initial 'indicator': lo must be < hi");
      }
    }
    return [=](std::span<const double> x) {
      for (size_t d = 0; d < x.size(); ++d) {
        if (x[d] < lo[d] || x[d] > hi[d]) return 0.0;
      }
      return amplitude;
    };
  }
  throw std::invalid_argument("unknown initial data '" + id + "'");
}

std::vector<std::string> flux_catalog() {
  return {"zero", "advection", "burgers", "variable_advection"};
}

std::vector<std::string> source_catalog() {
  return {"none", "linear", "gaussian", "gaussian_linear", "coordinate"};
}

std::vector<std::string> initial_catalog() { return {"bump", "indicator"}; }

}  // namespace balaw
