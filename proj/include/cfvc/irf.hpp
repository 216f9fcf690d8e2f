#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfvc/var_model.hpp"

namespace cfvc {

/// Orthogonalized impulse response of one variable to one shock.  point,
/// lower and upper hold horizon + 1 entries (lag 0 first); the bands stay
/// empty for point-only runs.
struct IrfResult {
  std::string impulse;
  std::string response;
  int horizon = 0;
  bool cumulative = false;
  Vector point;
  Vector lower;
  Vector upper;
  double level = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
  int discarded = 0;
};

/// Moving-average coefficients orthogonalized with the lower Cholesky
/// factor of the residual covariance, after reordering the variables to
/// `ordering` (which must be a permutation of the model's names; the
/// identification depends on it).  Returns one result per impulse and
/// response combination, impulse-major in the given ordering.
std::vector<IrfResult> irf_point(const VarModel& model,
                                 const std::vector<std::string>& ordering,
                                 int horizon, bool cumulative = true);

/// Residual-based recursive bootstrap around irf_point.  Replicates are
/// regenerated from resampled centered residuals, refit, and summarized by
/// percentile bands at the given coverage level.  Replicates that fail to
/// refit or produce non-finite paths are dropped and counted in
/// `discarded`.  Identical seeds give identical bands.
std::vector<IrfResult> irf_bootstrap(const VarModel& model,
                                     const std::vector<std::string>& ordering,
                                     int horizon, int replications,
                                     double level, std::uint64_t seed,
                                     bool cumulative = true);

}  // namespace cfvc
