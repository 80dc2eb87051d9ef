#include "balaw/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "balaw/kahan.hpp"

namespace balaw {

Grid::Grid(Vec origin, double spacing, std::vector<std::int64_t> cells,
           std::int64_t cell_cap)
    : origin_(std::move(origin)), spacing_(spacing), cells_(std::move(cells)) {
  if (cells_.empty() || origin_.size() != cells_.size()) {
    throw std::invalid_argument("Grid: origin/cells dimension mismatch");
  }
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw std::invalid_argument("Grid: spacing must be positive and finite");
  }
  total_ = 1;
  for (std::int64_t c : cells_) {
    if (c <= 0) throw std::invalid_argument("Grid: cell counts must be > 0");
    if (total_ > cell_cap / c) {
      throw std::invalid_argument(
          "Grid: total cell count exceeds the configured memory cap (" +
          std::to_string(cell_cap) + " cells)");
    }
    total_ *= c;
  }
  strides_.assign(cells_.size(), 1);
  for (int d = static_cast<int>(cells_.size()) - 2; d >= 0; --d) {
    strides_[d] = strides_[d + 1] * cells_[d + 1];
  }
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < cells_.size(); ++d) v *= spacing_;
  return v;
}

Box Grid::domain() const {
  Box b;
  b.lo = origin_;
  b.hi = origin_;
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    b.hi[d] += cells_[d] * spacing_;
  }
  return b;
}

std::int64_t Grid::flat_index(std::span<const std::int64_t> idx) const {
  std::int64_t flat = 0;
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    flat += idx[d] * strides_[d];
  }
  return flat;
}

void Grid::unflatten(std::int64_t flat, std::span<std::int64_t> idx) const {
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    idx[d] = flat / strides_[d];
    flat -= idx[d] * strides_[d];
  }
}

void Grid::cell_center(std::int64_t flat, std::span<double> x) const {
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    const std::int64_t i = flat / strides_[d];
    flat -= i * strides_[d];
    x[d] = center(static_cast<int>(d), i);
  }
}

bool Grid::operator==(const Grid& other) const {
  return origin_ == other.origin_ && spacing_ == other.spacing_ &&
         cells_ == other.cells_;
}

GridPtr make_grid(const Box& domain, const std::vector<std::int64_t>& cells,
                  std::int64_t cell_cap) {
  domain.validate();
  if (cells.size() != domain.lo.size()) {
    throw std::invalid_argument("make_grid: cells/domain dimension mismatch");
  }
  const double h = domain.extent(0) / cells[0];
  for (std::size_t d = 1; d < cells.size(); ++d) {
    const double hd = domain.extent(static_cast<int>(d)) / cells[d];
    if (std::abs(hd - h) > 1e-9 * h) {
      throw std::invalid_argument(
          "make_grid: domain extents are inconsistent with an isotropic "
          "spacing");
    }
  }
  return std::make_shared<Grid>(domain.lo, h, cells, cell_cap);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("ScalarField: null grid");
  if (static_cast<std::int64_t>(values_.size()) != grid_->cell_count()) {
    throw std::invalid_argument("ScalarField: value count != cell count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("ScalarField: non-finite value");
    }
  }
}

ScalarField ScalarField::sample(
    GridPtr grid, const std::function<double(std::span<const double>)>& f) {
  std::vector<double> values(grid->cell_count());
  std::vector<double> x(grid->dimension());
  for (std::int64_t i = 0; i < grid->cell_count(); ++i) {
    grid->cell_center(i, x);
    values[i] = f(x);
  }
  return ScalarField(std::move(grid), std::move(values));
}

ScalarField ScalarField::zeros(GridPtr grid) {
  std::vector<double> values(grid->cell_count(), 0.0);
  return ScalarField(std::move(grid), std::move(values));
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::integral() const {
  KahanSum s;
  for (double v : values_) s.add(v);
  return s.value() * grid_->cell_volume();
}

bool ScalarField::compactly_supported(int margin_cells,
                                      double tolerance) const {
  const int dim = grid_->dimension();
  std::vector<std::int64_t> idx(dim);
  for (std::int64_t i = 0; i < grid_->cell_count(); ++i) {
    if (std::abs(values_[i]) <= tolerance) continue;
    grid_->unflatten(i, idx);
    for (int d = 0; d < dim; ++d) {
      if (idx[d] < margin_cells ||
          idx[d] >= grid_->cells()[d] - margin_cells) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace balaw
