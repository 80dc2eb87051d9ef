#pragma once

#include <string>
#include <vector>

#include "balaw/grid.hpp"
#include "balaw/model.hpp"
#include "balaw/sup_norm.hpp"

namespace balaw {

/// One diagnostic on the standing assumptions behind the estimates. A failed
/// check is advisory: the harness reports it and still evaluates the bounds,
/// since the checks are necessarily finite samples of infinite conditions.
struct HypothesisCheck {
  std::string id;
  bool satisfied = false;
  double measure = 0.0;
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_satisfied() const;
  std::vector<std::string> warnings() const;
};

/// Runs the assumption diagnostics:
///  - derivative_consistency: analytic derivative entries against finite
///    differences at random probes;
///  - smoothness_assumed: records that continuity of the flux second
///    derivatives is assumed, not checked;
///  - balance_gradient_integrable: integrates the balance gradient norm over
///    a ladder of growing boxes and flags growth that does not taper;
///  - initial_data_regular: finite variation, mass, and bound of the data.
HypothesisReport check_hypotheses(const ModelPtr& model, const DomainSlab& slab,
                                  const ScalarField& initial_data,
                                  const SamplingSpec& spec = {});

}  // namespace balaw
