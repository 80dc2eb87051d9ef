#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "balaw/geometry.hpp"

namespace balaw {

/// Hard cap on the total cell count of a single grid; guards scenario configs
/// against accidental memory blowups. Overridable per grid.
inline constexpr std::int64_t kDefaultCellCap = std::int64_t{1} << 25;

/// Uniform cell-centered grid over an axis-aligned box. Cell (i_0, ..,
/// i_{N-1}) has center origin_d + (i_d + 1/2) h on each axis. Flat indices
/// enumerate cells lexicographically with the last axis fastest, which fixes
/// the deterministic reduction order used throughout.
class Grid {
 public:
  Grid(Vec origin, double spacing, std::vector<std::int64_t> cells,
       std::int64_t cell_cap = kDefaultCellCap);

  int dimension() const { return static_cast<int>(cells_.size()); }
  double spacing() const { return spacing_; }
  const Vec& origin() const { return origin_; }
  const std::vector<std::int64_t>& cells() const { return cells_; }
  std::int64_t cell_count() const { return total_; }
  std::int64_t stride(int axis) const { return strides_[axis]; }
  double cell_volume() const;

  Box domain() const;

  double center(int axis, std::int64_t index) const {
    return origin_[axis] + (index + 0.5) * spacing_;
  }

  std::int64_t flat_index(std::span<const std::int64_t> idx) const;
  void unflatten(std::int64_t flat, std::span<std::int64_t> idx) const;
  void cell_center(std::int64_t flat, std::span<double> x) const;

  bool operator==(const Grid& other) const;

 private:
  Vec origin_;
  double spacing_ = 0.0;
  std::vector<std::int64_t> cells_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds the grid covering `domain` with the given per-axis cell counts.
/// The spacing is taken from axis 0; the box extents must be consistent with
/// a single isotropic spacing (within rounding).
GridPtr make_grid(const Box& domain, const std::vector<std::int64_t>& cells,
                  std::int64_t cell_cap = kDefaultCellCap);

/// Scalar cell data bound to a grid. Values are validated to be finite on
/// construction.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values);

  /// Point-samples f at every cell center.
  static ScalarField sample(
      GridPtr grid,
      const std::function<double(std::span<const double>)>& f);

  static ScalarField zeros(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double operator[](std::int64_t i) const { return values_[i]; }

  double max_abs() const;
  /// Sum of values times cell volume (the grid integral), compensated.
  double integral() const;

  /// True when every cell within `margin_cells` of the boundary is below
  /// `tolerance` in absolute value.
  bool compactly_supported(int margin_cells, double tolerance) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

}  // namespace balaw
