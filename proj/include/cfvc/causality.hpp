#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfvc/var_model.hpp"

namespace cfvc {

/// One direction of a Toda-Yamamoto Granger non-causality test.
///
/// The test fits a level VAR with m + d_max lags and applies a Wald test
/// to the first m lag coefficients of the cause variable in the effect
/// equation; the extra d_max lags absorb possible integration so the
/// statistic keeps its chi-square(m) limit.
struct GrangerResult {
  std::string cause;
  std::string effect;
  int m = 0;
  int d_max = 0;
  double wald_statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool reject_at_1pct = false;
  bool reject_at_5pct = false;
  bool reject_at_10pct = false;
};

GrangerResult ty_granger(const TimeSeries& effect, const TimeSeries& cause,
                         int m, int d_max,
                         DeterministicSpec spec = DeterministicSpec::constant);

/// The same test at m-1, m and m+1 lags.  Ends of the window that are
/// infeasible (m-1 < 1, or too little data for m+1) stay empty.  volatile_
/// flags a 5% conclusion that flips somewhere across the window.
struct TyRobustness {
  std::optional<GrangerResult> lower;
  GrangerResult center;
  std::optional<GrangerResult> upper;
  bool volatile_ = false;
};

TyRobustness ty_robustness(const TimeSeries& effect, const TimeSeries& cause,
                           int m, int d_max,
                           DeterministicSpec spec = DeterministicSpec::constant);

enum class JohansenStat { trace, max_eig };

/// Johansen cointegration result for a pair of series.  Statistics are
/// indexed by the null rank r (0 and 1); critical values are the
/// Osterwald-Lenum tables for the matching deterministic case.
struct JohansenResult {
  std::vector<std::string> variable_names;
  int lag = 0;  // level VAR order; differenced regressions use lag - 1
  DeterministicSpec spec = DeterministicSpec::constant_and_trend;
  Eigen::Index sample_size = 0;  // scaling factor of the statistics
  Vector eigenvalues;            // descending
  Vector trace_statistics;
  Vector max_eig_statistics;
  std::vector<CriticalValues> trace_critical_values;
  std::vector<CriticalValues> max_eig_critical_values;
  int concluded_rank = 0;  // smallest r whose trace null survives at 5%
};

JohansenResult johansen(const TimeSeries& a, const TimeSeries& b, int lag,
                        DeterministicSpec spec = DeterministicSpec::constant_and_trend);

/// Tabulated critical value for the bivariate Johansen test.  null_rank is
/// 0 or 1, level one of 0.01 / 0.05 / 0.10.
double johansen_critical_value(JohansenStat kind, int null_rank, double level,
                               DeterministicSpec spec);

}  // namespace cfvc
