#pragma once

#include <string>
#include <vector>

#include "cfvc/time_series.hpp"

namespace cfvc {

enum class DeterministicSpec { none, constant, constant_and_trend };

enum class LagCriterion { aic, bic };

enum class UnitRootTest { adf, pp, kpss };

struct CriticalValues {
  double pct1 = 0.0;
  double pct5 = 0.0;
  double pct10 = 0.0;
};

struct UnitRootResult {
  UnitRootTest test = UnitRootTest::adf;
  DeterministicSpec spec = DeterministicSpec::constant;
  double statistic = 0.0;
  int lags = 0;            // adf: chosen lag count; pp/kpss: bandwidth
  Eigen::Index nobs = 0;   // observations entering the final regression
  CriticalValues critical_values;
  bool reject_at_5pct = false;
};

/// Newey-West automatic bandwidth, floor(4 (n/100)^(2/9)).
int newey_west_bandwidth(Eigen::Index n);

/// Augmented Dickey-Fuller test.  The lag length is chosen over 0..max_lag
/// by the requested information criterion on a common estimation sample,
/// then the test regression is refit on the longest sample the chosen lag
/// allows.  Critical values follow the MacKinnon (2010) response surface.
/// The null is a unit root; rejection (left tail) favors stationarity.
UnitRootResult adf(const TimeSeries& series, DeterministicSpec spec,
                   int max_lag = 6, LagCriterion criterion = LagCriterion::aic);

/// Phillips-Perron Z-tau test with a Bartlett-kernel long-run variance.
/// bandwidth < 0 selects the automatic Newey-West rule.  Same null and
/// critical values as the ADF.
UnitRootResult pp(const TimeSeries& series, DeterministicSpec spec,
                  int bandwidth = -1);

/// KPSS stationarity test.  The null is stationarity (around a constant or
/// a linear trend); rejection sits in the right tail.  spec none is not
/// defined for this test and throws InvalidSpec.
UnitRootResult kpss(const TimeSeries& series, DeterministicSpec spec,
                    int bandwidth = -1);

/// Evidence gathered at one differencing level.
struct IntegrationLevel {
  int d = 0;
  UnitRootResult adf;
  UnitRootResult pp;
  UnitRootResult kpss;
  std::string verdict;  // "stationary", "nonstationary" or "ambiguous"
};

struct IntegrationDecision {
  int order = 0;
  bool capped = false;  // max_order reached without clean stationarity
  std::vector<IntegrationLevel> levels;
};

/// Classifies the integration order by differencing until the tests agree
/// on stationarity: the series is I(d) at the first d where the ADF
/// rejects its unit-root null and the KPSS does not reject stationarity
/// (both at 5%).  Disagreement counts as still nonstationary.  Levels are
/// tested against a trend, differences against a constant.
IntegrationDecision integration_order(const TimeSeries& series,
                                      int max_order = 2);

}  // namespace cfvc
