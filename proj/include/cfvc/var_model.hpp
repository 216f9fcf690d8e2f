#pragma once

#include <string>
#include <vector>

#include "cfvc/time_series.hpp"
#include "cfvc/unit_root.hpp"

namespace cfvc {

/// Vector autoregression estimated equation by equation with least
/// squares.  The design matrix carries deterministic columns first, then
/// all variables at lag 1, all variables at lag 2 and so on; the trend
/// column holds the absolute 1-based time index of each observation so
/// that coefficients match the common JMulTi convention.
struct VarModel {
  std::vector<std::string> variable_names;
  int k = 0;         // variables
  int m = 0;         // lag order
  int offset = 0;    // presample observations dropped beyond the lags
  DeterministicSpec spec = DeterministicSpec::constant;

  Matrix data;       // full input sample, n x k (column per variable)
  YearMonth start{2000, 1};

  Matrix params;     // (ntrend + k m) x k, column per equation
  std::vector<Matrix> coefficient_matrices;  // A_1..A_m, entry (i,l): eq i, var l
  Vector intercepts;       // k (zero when spec is none)
  Vector trend_coeffs;     // k (zero unless spec has a trend)

  Matrix residuals;        // t_eff x k
  Matrix sigma_u;          // residual covariance, dof adjusted
  Matrix sigma_u_mle;      // residual covariance, divided by t_eff
  Matrix zz_inverse;       // (Z'Z)^-1 of the stacked design
  Eigen::Index t_eff = 0;  // observations entering the regression

  int ntrend() const;
  /// Number of estimated parameters per equation.
  int params_per_equation() const { return ntrend() + k * m; }
};

/// Fits a VAR(m).  offset drops extra presample rows so models with
/// different lag orders can be compared on one estimation sample.
VarModel fit_var(const std::vector<TimeSeries>& series, int m,
                 DeterministicSpec spec, int offset = 0);

struct InformationCriteria {
  double aic = 0.0;
  double bic_sic = 0.0;
  double fpe = 0.0;
};

InformationCriteria information_criteria(const VarModel& model);

struct LjungBoxResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Portmanteau test for residual autocorrelation up to horizon h.  The
/// dof is h minus fitted_params, floored at one.
LjungBoxResult ljung_box(const Vector& residuals, int h, int fitted_params);

/// Companion-matrix root moduli, largest first.  The model is stable when
/// all of them are below one.
std::vector<double> stability_roots(const VarModel& model);

struct LagCandidate {
  int m = 0;
  InformationCriteria criteria;
  double ljung_box_min_p = 0.0;  // worst equation at h = 12
  bool stable = false;
};

struct LagSelection {
  int chosen_m = 0;
  bool diagnostics_violated = false;  // fell back to the BIC minimizer
  std::string rationale;
  std::vector<LagCandidate> candidates;
};

/// Chooses the lag order over 1..max_lag: every candidate is fit on the
/// common sample implied by max_lag, the AIC / BIC / FPE minimizers are
/// collected, and the smallest of them whose residuals pass Ljung-Box at
/// 5% in every equation and whose roots are stable wins.  When none
/// survives the diagnostics the BIC minimizer is returned with
/// diagnostics_violated set.
LagSelection select_lag(const std::vector<TimeSeries>& series, int max_lag,
                        DeterministicSpec spec);

}  // namespace cfvc
