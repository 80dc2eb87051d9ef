#include "balaw/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace balaw {

const char* component_name(Component c) {
  switch (c) {
    case Component::flux: return "flux";
    case Component::source: return "source";
    case Component::flux_u: return "flux_u";
    case Component::flux_u_grad: return "flux_u_grad";
    case Component::source_u: return "source_u";
    case Component::flux_div: return "flux_div";
    case Component::balance_gradient: return "balance_gradient";
  }
  return "?";
}

namespace {
int index_of(Component c) { return static_cast<int>(c); }

double fd_step(double eta, double at) {
  return eta * std::max(1.0, std::abs(at));
}
}  // namespace

BalanceLawModel::BalanceLawModel(Parts parts) : parts_(std::move(parts)) {
  if (parts_.dimension < 1) {
    throw std::invalid_argument("BalanceLawModel: dimension must be >= 1");
  }
  if (!parts_.flux) {
    throw std::invalid_argument("BalanceLawModel: flux callable is required");
  }
  if (!parts_.source) {
    throw std::invalid_argument("BalanceLawModel: source callable is required");
  }
  if (!(parts_.fd_eta > 0.0)) {
    throw std::invalid_argument("BalanceLawModel: fd_eta must be positive");
  }
}

void BalanceLawModel::flux(double t, std::span<const double> x, double u,
                           std::span<double> out) const {
  parts_.flux(t, x, u, out);
}

double BalanceLawModel::flux_component(double t, std::span<const double> x,
                                       double u, int axis) const {
  std::vector<double> buf(parts_.dimension);
  parts_.flux(t, x, u, buf);
  return buf[axis];
}

double BalanceLawModel::source(double t, std::span<const double> x,
                               double u) const {
  return parts_.source(t, x, u);
}

void BalanceLawModel::flux_u(double t, std::span<const double> x, double u,
                             std::span<double> out) const {
  require(Component::flux_u, "flux u-derivative");
  if (parts_.flux_u) {
    parts_.flux_u(t, x, u, out);
    return;
  }
  const double eta = fd_step(parts_.fd_eta, u);
  std::vector<double> hi(parts_.dimension), lo(parts_.dimension);
  parts_.flux(t, x, u + eta, hi);
  parts_.flux(t, x, u - eta, lo);
  for (int d = 0; d < parts_.dimension; ++d) {
    out[d] = (hi[d] - lo[d]) / (2.0 * eta);
  }
}

double BalanceLawModel::flux_u_component(double t, std::span<const double> x,
                                         double u, int axis) const {
  std::vector<double> buf(parts_.dimension);
  flux_u(t, x, u, buf);
  return buf[axis];
}

void BalanceLawModel::flux_u_grad(double t, std::span<const double> x,
                                  double u, std::span<double> out) const {
  require(Component::flux_u_grad, "flux u-derivative spatial gradient");
  const int n = parts_.dimension;
  if (parts_.flux_u_grad) {
    parts_.flux_u_grad(t, x, u, out);
    return;
  }
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> hi(n), lo(n);
  for (int j = 0; j < n; ++j) {
    const double eta = fd_step(parts_.fd_eta, x[j]);
    xs[j] = x[j] + eta;
    flux_u(t, xs, u, hi);
    xs[j] = x[j] - eta;
    flux_u(t, xs, u, lo);
    xs[j] = x[j];
    for (int i = 0; i < n; ++i) {
      out[i * n + j] = (hi[i] - lo[i]) / (2.0 * eta);
    }
  }
}

double BalanceLawModel::source_u(double t, std::span<const double> x,
                                 double u) const {
  require(Component::source_u, "source u-derivative");
  if (parts_.source_u) return parts_.source_u(t, x, u);
  const double eta = fd_step(parts_.fd_eta, u);
  return (parts_.source(t, x, u + eta) - parts_.source(t, x, u - eta)) /
         (2.0 * eta);
}

double BalanceLawModel::flux_div(double t, std::span<const double> x,
                                 double u) const {
  require(Component::flux_div, "flux spatial divergence");
  if (parts_.flux_div) return parts_.flux_div(t, x, u);
  const int n = parts_.dimension;
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> hi(n), lo(n);
  double div = 0.0;
  for (int d = 0; d < n; ++d) {
    const double eta = fd_step(parts_.fd_eta, x[d]);
    xs[d] = x[d] + eta;
    parts_.flux(t, xs, u, hi);
    xs[d] = x[d] - eta;
    parts_.flux(t, xs, u, lo);
    xs[d] = x[d];
    div += (hi[d] - lo[d]) / (2.0 * eta);
  }
  return div;
}

void BalanceLawModel::balance_gradient(double t, std::span<const double> x,
                                       double u, std::span<double> out) const {
  require(Component::balance_gradient,
          "gradient of (source - flux divergence)");
  if (parts_.balance_gradient) {
    parts_.balance_gradient(t, x, u, out);
    return;
  }
  const int n = parts_.dimension;
  std::vector<double> xs(x.begin(), x.end());
  for (int j = 0; j < n; ++j) {
    const double eta = fd_step(parts_.fd_eta, x[j]);
    xs[j] = x[j] + eta;
    const double hi = parts_.source(t, xs, u) - flux_div(t, xs, u);
    xs[j] = x[j] - eta;
    const double lo = parts_.source(t, xs, u) - flux_div(t, xs, u);
    xs[j] = x[j];
    out[j] = (hi - lo) / (2.0 * eta);
  }
}

Provenance BalanceLawModel::provenance(Component c) const {
  if (disabled_[index_of(c)]) return Provenance::unavailable;
  switch (c) {
    case Component::flux:
    case Component::source:
      return Provenance::analytic;
    case Component::flux_u:
      return parts_.flux_u ? Provenance::analytic
                           : Provenance::finite_difference;
    case Component::flux_u_grad:
      return parts_.flux_u_grad ? Provenance::analytic
                                : Provenance::finite_difference;
    case Component::source_u:
      return parts_.source_u ? Provenance::analytic
                             : Provenance::finite_difference;
    case Component::flux_div:
      return parts_.flux_div ? Provenance::analytic
                             : Provenance::finite_difference;
    case Component::balance_gradient:
      return parts_.balance_gradient ? Provenance::analytic
                                     : Provenance::finite_difference;
  }
  return Provenance::unavailable;
}

void BalanceLawModel::disable(Component c) { disabled_[index_of(c)] = true; }

void BalanceLawModel::require(Component c,
                              const std::string& requirement) const {
  if (disabled_[index_of(c)]) {
    throw std::runtime_error("model '" + parts_.name + "': " + requirement +
                             " (" + component_name(c) +
                             ") is unavailable; the estimate needs it");
  }
}

double BalanceLawModel::derivative_consistency(const DomainSlab& slab,
                                               int probes) const {
  slab.validate();
  const int n = parts_.dimension;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto random_point = [&](double& t, std::vector<double>& x, double& u) {
    t = slab.time_lo + unit(rng) * (slab.time_hi - slab.time_lo);
    for (int d = 0; d < n; ++d) {
      x[d] = slab.space.lo[d] + unit(rng) * slab.space.extent(d);
    }
    u = -slab.value_bound + 2.0 * unit(rng) * slab.value_bound;
  };

  // Rebuild a copy without analytic entries; compare against this model.
  Parts fd_parts;
  fd_parts.dimension = n;
  fd_parts.name = parts_.name + "/fd";
  fd_parts.flux = parts_.flux;
  fd_parts.source = parts_.source;
  fd_parts.fd_eta = parts_.fd_eta;
  const BalanceLawModel fd(fd_parts);

  double worst = 0.0;
  std::vector<double> x(n), a(n), b(n), ma(n * n), mb(n * n);
  double t = 0.0, u = 0.0;
  for (int p = 0; p < probes; ++p) {
    random_point(t, x, u);
    if (parts_.flux_u) {
      flux_u(t, x, u, a);
      fd.flux_u(t, x, u, b);
      for (int d = 0; d < n; ++d) {
        worst = std::max(worst,
                         std::abs(a[d] - b[d]) / std::max(1.0, std::abs(a[d])));
      }
    }
    if (parts_.flux_u_grad) {
      flux_u_grad(t, x, u, ma);
      fd.flux_u_grad(t, x, u, mb);
      for (int i = 0; i < n * n; ++i) {
        worst = std::max(
            worst, std::abs(ma[i] - mb[i]) / std::max(1.0, std::abs(ma[i])));
      }
    }
    if (parts_.source_u) {
      const double va = source_u(t, x, u);
      const double vb = fd.source_u(t, x, u);
      worst = std::max(worst, std::abs(va - vb) / std::max(1.0, std::abs(va)));
    }
    if (parts_.flux_div) {
      const double va = flux_div(t, x, u);
      const double vb = fd.flux_div(t, x, u);
      worst = std::max(worst, std::abs(va - vb) / std::max(1.0, std::abs(va)));
    }
    if (parts_.balance_gradient) {
      balance_gradient(t, x, u, a);
      fd.balance_gradient(t, x, u, b);
      for (int d = 0; d < n; ++d) {
        worst = std::max(worst,
                         std::abs(a[d] - b[d]) / std::max(1.0, std::abs(a[d])));
      }
    }
  }
  return worst;
}

namespace {

VectorFn combine_vector(const ModelPtr& a, const ModelPtr& b,
                        void (BalanceLawModel::*eval)(double,
                                                      std::span<const double>,
                                                      double,
                                                      std::span<double>) const,
                        int n) {
  return [a, b, eval, n](double t, std::span<const double> x, double u,
                         std::span<double> out) {
    std::vector<double> tmp(n);
    ((*a).*eval)(t, x, u, out);
    ((*b).*eval)(t, x, u, tmp);
    for (int d = 0; d < n; ++d) out[d] -= tmp[d];
  };
}

}  // namespace

BalanceLawModel model_difference(const ModelPtr& a, const ModelPtr& b) {
  if (a->dimension() != b->dimension()) {
    throw std::invalid_argument("model_difference: dimension mismatch");
  }
  const int n = a->dimension();

  BalanceLawModel::Parts parts;
  parts.dimension = n;
  parts.name = a->name() + " - " + b->name();
  parts.source_is_zero = a->source_is_zero() && b->source_is_zero();
  parts.fd_eta = std::min(a->fd_eta(), b->fd_eta());
  parts.flux = [a, b, n](double t, std::span<const double> x, double u,
                         std::span<double> out) {
    std::vector<double> tmp(n);
    a->flux(t, x, u, out);
    b->flux(t, x, u, tmp);
    for (int d = 0; d < n; ++d) out[d] -= tmp[d];
  };
  parts.source = [a, b](double t, std::span<const double> x, double u) {
    return a->source(t, x, u) - b->source(t, x, u);
  };

  auto analytic = [&](Component c) {
    return a->provenance(c) == Provenance::analytic &&
           b->provenance(c) == Provenance::analytic;
  };

  if (analytic(Component::flux_u)) {
    parts.flux_u = combine_vector(a, b, &BalanceLawModel::flux_u, n);
  }
  if (analytic(Component::flux_u_grad)) {
    parts.flux_u_grad = [a, b, n](double t, std::span<const double> x,
                                  double u, std::span<double> out) {
      std::vector<double> tmp(n * n);
      a->flux_u_grad(t, x, u, out);
      b->flux_u_grad(t, x, u, tmp);
      for (int i = 0; i < n * n; ++i) out[i] -= tmp[i];
    };
  }
  if (analytic(Component::source_u)) {
    parts.source_u = [a, b](double t, std::span<const double> x, double u) {
      return a->source_u(t, x, u) - b->source_u(t, x, u);
    };
  }
  if (analytic(Component::flux_div)) {
    parts.flux_div = [a, b](double t, std::span<const double> x, double u) {
      return a->flux_div(t, x, u) - b->flux_div(t, x, u);
    };
  }
  if (analytic(Component::balance_gradient)) {
    parts.balance_gradient =
        combine_vector(a, b, &BalanceLawModel::balance_gradient, n);
  }
  return BalanceLawModel(parts);
}

}  // namespace balaw
