#pragma once

#include <span>

#include <Eigen/Dense>

#include "mortgp/data_model.hpp"
#include "mortgp/gp_core.hpp"

namespace mortgp {

/// Conditions `gp` on additional cells with its hyperparameters, noise model
/// and mean basis held fixed; beta is re-estimated by GLS over the union.
/// Zero-death cells in `new_cells` are skipped like in any training table.
///
/// Throws ValidationError when a new cell coincides with a training input
/// and NumericalError when the augmented system cannot be factorized.
FittedGP update(const FittedGP &gp, const MortalityTable &new_cells);

struct UpdateReport {
  PosteriorSummary before;
  PosteriorSummary after;
  /// s_before - s_after at each probe.
  Eigen::VectorXd sd_delta;
};

UpdateReport make_update_report(const FittedGP &before, const FittedGP &after,
                                std::span<const AgeYear> probes);

} // namespace mortgp
