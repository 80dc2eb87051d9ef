#pragma once

#include <string>
#include <utility>

#include "balaw/grid.hpp"

namespace balaw {

/// Writes a snapshot as CSV: '#'-prefixed header lines carrying the grid
/// metadata (dimension, origin, spacing, cells, time), then one row per cell
/// with its center coordinates and value, in flat cell order.
void write_field_csv(const std::string& path, const ScalarField& u,
                     double time);

/// Flat little-endian binary snapshot with the same metadata, followed by the
/// raw cell values. Round-trips exactly.
void write_field_binary(const std::string& path, const ScalarField& u,
                        double time);

std::pair<ScalarField, double> read_field_binary(const std::string& path);

}  // namespace balaw
