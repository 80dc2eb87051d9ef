#include "balaw/functionals.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "balaw/kahan.hpp"

namespace balaw {

double total_variation(const ScalarField& u, int margin_cells,
                       double margin_tolerance) {
  const Grid& g = u.grid();
  if (margin_tolerance < 0.0) margin_tolerance = 1e-12 * u.max_abs();
  if (!u.compactly_supported(margin_cells, margin_tolerance)) {
    throw std::invalid_argument(
        "total_variation: field is not compactly supported away from the "
        "grid boundary (margin " +
        std::to_string(margin_cells) + " cells)");
  }

  const int dim = g.dimension();
  double face_measure = 1.0;
  for (int d = 0; d < dim - 1; ++d) face_measure *= g.spacing();

  const std::span<const double> v = u.values();
  KahanSum tv;
  std::vector<std::int64_t> idx(dim);
  for (int d = 0; d < dim; ++d) {
    const std::int64_t stride = g.stride(d);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
      g.unflatten(i, idx);
      if (idx[d] + 1 >= g.cells()[d]) continue;
      tv.add(std::abs(v[i + stride] - v[i]));
    }
  }
  return tv.value() * face_measure;
}

namespace {

std::vector<std::int64_t> lattice_offsets(const Grid& g,
                                          std::span<const double> shift) {
  if (static_cast<int>(shift.size()) != g.dimension()) {
    throw std::invalid_argument("shift dimension mismatch");
  }
  std::vector<std::int64_t> k(shift.size());
  for (std::size_t d = 0; d < shift.size(); ++d) {
    const double cells = shift[d] / g.spacing();
    k[d] = static_cast<std::int64_t>(std::llround(cells));
    if (std::abs(cells - static_cast<double>(k[d])) > 1e-9) {
      throw std::invalid_argument(
          "shifted_l1_difference: shift component " + std::to_string(d) +
          " is not an integer multiple of the grid spacing");
    }
  }
  return k;
}

}  // namespace

double shifted_l1_difference(const ScalarField& u,
                             std::span<const double> shift) {
  const Grid& g = u.grid();
  const std::vector<std::int64_t> k = lattice_offsets(g, shift);
  const int dim = g.dimension();
  const std::span<const double> v = u.values();

  KahanSum sum;
  std::vector<std::int64_t> idx(dim);
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    g.unflatten(i, idx);
    bool inside = true;
    std::int64_t j = 0;
    for (int d = 0; d < dim; ++d) {
      const std::int64_t jd = idx[d] - k[d];
      if (jd < 0 || jd >= g.cells()[d]) {
        inside = false;
        break;
      }
      j += jd * g.stride(d);
    }
    const double other = inside ? v[j] : 0.0;
    sum.add(std::abs(v[i] - other));
  }
  return sum.value() * g.cell_volume();
}

double l1_distance(const ScalarField& a, const ScalarField& b,
                   const Region& region) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument("l1_distance: fields on different grids");
  }
  const Grid& g = a.grid();
  const std::span<const double> va = a.values();
  const std::span<const double> vb = b.values();

  KahanSum sum;
  if (region.kind == Region::Kind::whole) {
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
      sum.add(std::abs(va[i] - vb[i]));
    }
  } else {
    std::vector<double> x(g.dimension());
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
      g.cell_center(i, x);
      if (!region.contains(x)) continue;
      sum.add(std::abs(va[i] - vb[i]));
    }
  }
  return sum.value() * g.cell_volume();
}

double l1_norm(const ScalarField& u, const Region& region) {
  return l1_distance(u, ScalarField::zeros(u.grid_ptr()), region);
}

SupportBox support_box(const ScalarField& u, double threshold) {
  const Grid& g = u.grid();
  const int dim = g.dimension();
  SupportBox box = SupportBox::empty(dim);
  std::vector<std::int64_t> idx(dim);
  const double half = 0.5 * g.spacing();
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    if (std::abs(u[i]) <= threshold) continue;
    g.unflatten(i, idx);
    SupportBox cell = SupportBox::empty(dim);
    cell.is_empty = false;
    for (int d = 0; d < dim; ++d) {
      const double c = g.center(d, idx[d]);
      cell.lo[d] = c - half;
      cell.hi[d] = c + half;
    }
    box.merge(cell);
  }
  return box;
}

double tv_via_mollifier(const ScalarField& u, const MollifierProfile& profile,
                        double lambda) {
  const Grid& g = u.grid();
  if (profile.dimension() != g.dimension()) {
    throw std::invalid_argument(
        "tv_via_mollifier: mollifier dimension does not match the field");
  }
  if (!(lambda >= 2.0 * g.spacing())) {
    throw std::invalid_argument(
        "tv_via_mollifier: smoothing scale " + std::to_string(lambda) +
        " is below twice the grid spacing " + std::to_string(g.spacing()));
  }

  const MollifierConstants consts = mollifier_constants(profile);
  const int dim = g.dimension();
  const double h = g.spacing();
  const std::int64_t reach = static_cast<std::int64_t>(std::floor(lambda / h));
  const double weight_scale =
      g.cell_volume() / std::pow(lambda, dim);  // lattice weight x rho scale

  // Enumerate lattice shifts in the ball |z| < lambda, lexicographically.
  std::vector<std::int64_t> k(dim, -reach);
  std::vector<double> z(dim);
  KahanSum sum;
  while (true) {
    double norm2 = 0.0;
    bool all_zero = true;
    for (int d = 0; d < dim; ++d) {
      z[d] = k[d] * h;
      norm2 += z[d] * z[d];
      all_zero = all_zero && (k[d] == 0);
    }
    const double r = std::sqrt(norm2) / lambda;
    if (!all_zero && r < 1.0) {
      const double rho = profile.value(r);
      if (rho > 0.0) {
        sum.add(rho * weight_scale * shifted_l1_difference(u, z));
      }
    }
    int d = dim - 1;
    while (d >= 0 && k[d] == reach) {
      k[d] = -reach;
      --d;
    }
    if (d < 0) break;
    ++k[d];
  }
  return sum.value() / (consts.c1 * lambda);
}

}  // namespace balaw
