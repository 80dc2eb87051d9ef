#pragma once

#include <span>

#include "balaw/geometry.hpp"
#include "balaw/grid.hpp"
#include "balaw/mollifier.hpp"

namespace balaw {

/// Anisotropic grid total variation: sum over axes d and over neighbor pairs
/// of |u(x + h e_d) - u(x)| h^(N-1). Exact for piecewise-constant data in 1D;
/// in higher dimensions it is the l1-directional variant (axis-aligned data
/// make it coincide with the isotropic one).
///
/// Requires compact support: every cell within margin_cells of the boundary
/// must not exceed margin_tolerance (negative = use 1e-12 * max|u|).
double total_variation(const ScalarField& u, int margin_cells = 1,
                       double margin_tolerance = -1.0);

/// integral |u(x) - u(x - z)| dx for a lattice shift z (each component an
/// integer multiple of the spacing); cells shifted outside the grid read 0.
double shifted_l1_difference(const ScalarField& u,
                             std::span<const double> shift);

/// integral over `region` of |a - b|; both fields must share one grid.
double l1_distance(const ScalarField& a, const ScalarField& b,
                   const Region& region = Region::whole());

/// integral over `region` of |u|.
double l1_norm(const ScalarField& u, const Region& region = Region::whole());

/// Bounding box of cells with |u| > threshold, in outer cell-boundary
/// coordinates (each contributing cell counts with its full extent).
SupportBox support_box(const ScalarField& u, double threshold);

/// Finite-scale total variation surrogate:
///   (1 / (c1 lambda)) * integral integral |u(x) - u(x-z)| rho_lambda(z) dz dx
/// with rho_lambda(z) = lambda^-N mu1(|z|/lambda) and the z-integral
/// discretized on the grid lattice. Converges to the grid total variation as
/// lambda -> 0 (1D). Requires lambda >= 2h.
double tv_via_mollifier(const ScalarField& u, const MollifierProfile& profile,
                        double lambda);

}  // namespace balaw
