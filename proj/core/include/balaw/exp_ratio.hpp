#pragma once

#include <algorithm>
#include <cmath>

namespace balaw {

/// (e^{a t} - e^{b t}) / (a - b), evaluated as e^{b t} expm1((a-b) t)/(a-b)
/// so nearby rates do not cancel. Rates closer than 1e-8 relative to the
/// first rate's magnitude are treated as equal and take the limit value
/// t e^{a t} (at the midpoint rate, so the branch is symmetric in a, b).
inline double exp_ratio(double rate_a, double rate_b, double t) {
  const double gap = rate_a - rate_b;
  const double scale = std::max(1.0, std::abs(rate_a));
  if (std::abs(gap) < 1e-8 * scale) {
    return t * std::exp(0.5 * (rate_a + rate_b) * t);
  }
  return std::exp(rate_b * t) * std::expm1(gap * t) / gap;
}

}  // namespace balaw
