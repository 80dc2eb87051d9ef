#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "balaw/geometry.hpp"

namespace balaw {

using ScalarFn = std::function<double(double t, std::span<const double> x,
                                      double u)>;
using VectorFn = std::function<void(double t, std::span<const double> x,
                                    double u, std::span<double> out)>;
/// Matrices are row-major N x N; entry (i, j) holds d/dx_j of component i.
using MatrixFn = std::function<void(double t, std::span<const double> x,
                                    double u, std::span<double> out)>;

enum class Component {
  flux,              // f : R^N-valued
  source,            // F : scalar
  flux_u,            // d_u f
  flux_u_grad,       // grad_x d_u f
  source_u,          // d_u F
  flux_div,          // div_x f at fixed u
  balance_gradient,  // grad_x (F - div_x f) at fixed u
};

enum class Provenance { analytic, finite_difference, unavailable };

const char* component_name(Component c);

/// A balance law du/dt + div f(t,x,u) = F(t,x,u) together with the first
/// derivatives the estimates need. Derivatives not supplied analytically are
/// filled in by central finite differences of f and F; each entry remembers
/// its provenance. The finite-difference step is eta * max(1, |argument|)
/// per probed slot.
class BalanceLawModel {
 public:
  struct Parts {
    int dimension = 1;
    std::string name = "model";
    VectorFn flux;               // required
    ScalarFn source;             // required (may be identically zero)
    bool source_is_zero = false; // skips source work in the solver
    VectorFn flux_u;
    MatrixFn flux_u_grad;
    ScalarFn source_u;
    ScalarFn flux_div;
    VectorFn balance_gradient;
    double fd_eta = 1e-5;
  };

  explicit BalanceLawModel(Parts parts);

  int dimension() const { return parts_.dimension; }
  const std::string& name() const { return parts_.name; }
  bool source_is_zero() const { return parts_.source_is_zero; }
  double fd_eta() const { return parts_.fd_eta; }

  void flux(double t, std::span<const double> x, double u,
            std::span<double> out) const;
  double flux_component(double t, std::span<const double> x, double u,
                        int axis) const;
  double source(double t, std::span<const double> x, double u) const;
  void flux_u(double t, std::span<const double> x, double u,
              std::span<double> out) const;
  double flux_u_component(double t, std::span<const double> x, double u,
                          int axis) const;
  void flux_u_grad(double t, std::span<const double> x, double u,
                   std::span<double> out) const;
  double source_u(double t, std::span<const double> x, double u) const;
  double flux_div(double t, std::span<const double> x, double u) const;
  void balance_gradient(double t, std::span<const double> x, double u,
                        std::span<double> out) const;

  Provenance provenance(Component c) const;
  /// Marks a derivative entry unavailable (it will throw when evaluated,
  /// naming the requirement). Used to exercise hypothesis diagnostics.
  void disable(Component c);
  /// Throws when the component cannot be evaluated, naming `requirement`.
  void require(Component c, const std::string& requirement) const;

  /// Compares analytic derivative entries against their finite-difference
  /// versions at probe points scattered over the slab; returns the largest
  /// relative mismatch. Guards catalog models against wiring mistakes.
  double derivative_consistency(const DomainSlab& slab, int probes = 64) const;

 private:
  Parts parts_;
  bool disabled_[7] = {false, false, false, false, false, false, false};
};

/// The pairwise-difference model (f - g, F - G) used by the stability
/// estimate. Analytic entries combine when both operands have them; anything
/// else falls back to finite differences of the combined callables.
BalanceLawModel model_difference(const std::shared_ptr<const BalanceLawModel>& a,
                                 const std::shared_ptr<const BalanceLawModel>& b);

using ModelPtr = std::shared_ptr<const BalanceLawModel>;

}  // namespace balaw
