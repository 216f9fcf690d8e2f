#include "cfvc/unit_root.hpp"

#include <cmath>
#include <limits>

namespace cfvc {

namespace {

int ntrend_of(DeterministicSpec spec) {
  switch (spec) {
    case DeterministicSpec::none:
      return 0;
    case DeterministicSpec::constant:
      return 1;
    case DeterministicSpec::constant_and_trend:
      return 2;
  }
  return 0;
}

// MacKinnon (2010) response-surface coefficients for the tau statistic with
// one unit root: cv = b0 + b1/T + b2/T^2 + b3/T^3, rows 1% / 5% / 10%.
constexpr double kTauNone[3][4] = {
    {-2.56574, -2.2358, -3.627, 0.0},
    {-1.94100, -0.2686, -3.365, 31.223},
    {-1.61682, 0.2656, -2.714, 25.364},
};
constexpr double kTauConst[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
};
constexpr double kTauTrend[3][4] = {
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
};

CriticalValues mackinnon_critical_values(DeterministicSpec spec,
                                         Eigen::Index nobs) {
  const double (*table)[4] = kTauConst;
  if (spec == DeterministicSpec::none) table = kTauNone;
  if (spec == DeterministicSpec::constant_and_trend) table = kTauTrend;
  const double t = static_cast<double>(nobs);
  auto eval = [&](const double* b) {
    return b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t);
  };
  return {eval(table[0]), eval(table[1]), eval(table[2])};
}

// KPSS critical values (Kwiatkowski et al. 1992, table 1), right tail.
constexpr CriticalValues kKpssConst{0.739, 0.463, 0.347};
constexpr CriticalValues kKpssTrend{0.216, 0.146, 0.119};

Matrix deterministic_columns(DeterministicSpec spec, Eigen::Index rows) {
  Matrix d(rows, ntrend_of(spec));
  if (spec != DeterministicSpec::none) d.col(0).setOnes();
  if (spec == DeterministicSpec::constant_and_trend) {
    d.col(1) = Vector::LinSpaced(rows, 1.0, static_cast<double>(rows));
  }
  return d;
}

// Builds the ADF regression for `lag` augmentation lags over the final
// `rows` observations of the series: regressand dy_t, regressors
// [y_{t-1}, dy_{t-1}..dy_{t-lag}, deterministics].
struct AdfDesign {
  Matrix x;
  Vector y;
};

AdfDesign adf_design(const Vector& v, DeterministicSpec spec, int lag,
                     Eigen::Index rows) {
  const Eigen::Index n = v.size();
  const int ntrend = ntrend_of(spec);
  AdfDesign d;
  d.y.resize(rows);
  d.x.resize(rows, 1 + lag + ntrend);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index t = n - rows + i;  // 0-based time of the regressand
    d.y(i) = v(t) - v(t - 1);
    d.x(i, 0) = v(t - 1);
    for (int j = 1; j <= lag; ++j) {
      d.x(i, j) = v(t - j) - v(t - j - 1);
    }
  }
  if (ntrend > 0) {
    d.x.rightCols(ntrend) = deterministic_columns(spec, rows);
  }
  return d;
}

double information_criterion(double rss, Eigen::Index nobs, int k,
                             LagCriterion criterion) {
  const double n = static_cast<double>(nobs);
  const double penalty =
      criterion == LagCriterion::aic ? 2.0 : std::log(n);
  return n * std::log(rss / n) + penalty * k;
}

}  // namespace

int newey_west_bandwidth(Eigen::Index n) {
  return static_cast<int>(
      std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

UnitRootResult adf(const TimeSeries& series, DeterministicSpec spec,
                   int max_lag, LagCriterion criterion) {
  if (max_lag < 0) throw Error("adf: max_lag must be >= 0");
  const Vector& v = series.values();
  const Eigen::Index n = v.size();
  const int ntrend = ntrend_of(spec);
  const Eigen::Index common_rows = n - 1 - max_lag;
  if (common_rows < max_lag + ntrend + 4) {
    throw SeriesTooShort("adf: '" + series.label() +
                         "' is too short for max_lag " +
                         std::to_string(max_lag));
  }

  // Choose the lag on the common sample so every candidate explains the
  // same observations.
  int best_lag = 0;
  double best_ic = std::numeric_limits<double>::infinity();
  const AdfDesign common = adf_design(v, spec, max_lag, common_rows);
  for (int lag = 0; lag <= max_lag; ++lag) {
    Matrix x(common_rows, 1 + lag + ntrend);
    x.leftCols(1 + lag) = common.x.leftCols(1 + lag);
    if (ntrend > 0) x.rightCols(ntrend) = common.x.rightCols(ntrend);
    const OlsFit fit = ols(x, common.y);
    const double ic =
        information_criterion(fit.rss, common_rows, 1 + lag + ntrend, criterion);
    if (ic < best_ic) {
      best_ic = ic;
      best_lag = lag;
    }
  }

  // Refit on the longest sample the chosen lag permits.
  const Eigen::Index rows = n - 1 - best_lag;
  const AdfDesign d = adf_design(v, spec, best_lag, rows);
  const OlsFit fit = ols(d.x, d.y);
  const double se = std::sqrt(fit.coefficient_covariance(0, 0));

  UnitRootResult out;
  out.test = UnitRootTest::adf;
  out.spec = spec;
  out.statistic = fit.coefficients(0) / se;
  out.lags = best_lag;
  out.nobs = rows;
  out.critical_values = mackinnon_critical_values(spec, rows);
  out.reject_at_5pct = out.statistic < out.critical_values.pct5;
  return out;
}

UnitRootResult pp(const TimeSeries& series, DeterministicSpec spec,
                  int bandwidth) {
  const Vector& v = series.values();
  const Eigen::Index n = v.size();
  const Eigen::Index rows = n - 1;
  const int ntrend = ntrend_of(spec);
  if (rows < ntrend + 8) {
    throw SeriesTooShort("pp: '" + series.label() + "' is too short");
  }
  const int bw = bandwidth >= 0 ? bandwidth : newey_west_bandwidth(rows);
  if (bw >= rows) throw Error("pp: bandwidth exceeds the sample");

  // y_t on [y_{t-1}, deterministics]
  Matrix x(rows, 1 + ntrend);
  x.col(0) = v.head(rows);
  if (ntrend > 0) x.rightCols(ntrend) = deterministic_columns(spec, rows);
  const Vector y = v.tail(rows);
  const OlsFit fit = ols(x, y);

  const Vector& u = fit.residuals;
  const double nn = static_cast<double>(rows);
  const double gamma0 = u.squaredNorm() / nn;
  double lambda2 = u.squaredNorm();
  for (int j = 1; j <= bw; ++j) {
    const double w = 1.0 - static_cast<double>(j) / (bw + 1.0);
    lambda2 += 2.0 * w * u.tail(rows - j).dot(u.head(rows - j));
  }
  lambda2 /= nn;
  if (lambda2 <= 0.0) {
    throw Error("pp: long-run variance estimate is not positive");
  }

  const double s = std::sqrt(fit.sigma2);
  const double se_rho = std::sqrt(fit.coefficient_covariance(0, 0));
  const double lam = std::sqrt(lambda2);
  const double z_tau =
      std::sqrt(gamma0 / lambda2) * (fit.coefficients(0) - 1.0) / se_rho -
      (lambda2 - gamma0) * nn * se_rho / (2.0 * lam * s);

  UnitRootResult out;
  out.test = UnitRootTest::pp;
  out.spec = spec;
  out.statistic = z_tau;
  out.lags = bw;
  out.nobs = rows;
  out.critical_values = mackinnon_critical_values(spec, rows);
  out.reject_at_5pct = out.statistic < out.critical_values.pct5;
  return out;
}

UnitRootResult kpss(const TimeSeries& series, DeterministicSpec spec,
                    int bandwidth) {
  if (spec == DeterministicSpec::none) {
    throw InvalidSpec("kpss: the test needs a constant or a trend null");
  }
  const Vector& v = series.values();
  const Eigen::Index n = v.size();
  if (n < 12) {
    throw SeriesTooShort("kpss: '" + series.label() + "' is too short");
  }
  const int bw = bandwidth >= 0 ? bandwidth : newey_west_bandwidth(n);
  if (bw >= n) throw Error("kpss: bandwidth exceeds the sample");

  Vector resid;
  if (spec == DeterministicSpec::constant) {
    resid = v.array() - v.mean();
  } else {
    const Matrix x = deterministic_columns(spec, n);
    resid = ols(x, v).residuals;
  }

  const double nn = static_cast<double>(n);
  double s_hat = resid.squaredNorm();
  for (int j = 1; j <= bw; ++j) {
    const double w = 1.0 - static_cast<double>(j) / (bw + 1.0);
    s_hat += 2.0 * w * resid.tail(n - j).dot(resid.head(n - j));
  }
  s_hat /= nn;
  if (s_hat <= 0.0) {
    throw Error("kpss: long-run variance estimate is not positive");
  }

  double eta = 0.0;
  double partial = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    partial += resid(t);
    eta += partial * partial;
  }
  eta /= nn * nn;

  UnitRootResult out;
  out.test = UnitRootTest::kpss;
  out.spec = spec;
  out.statistic = eta / s_hat;
  out.lags = bw;
  out.nobs = n;
  out.critical_values =
      spec == DeterministicSpec::constant ? kKpssConst : kKpssTrend;
  out.reject_at_5pct = out.statistic > out.critical_values.pct5;
  return out;
}

IntegrationDecision integration_order(const TimeSeries& series, int max_order) {
  if (max_order < 0) throw Error("integration_order: max_order must be >= 0");
  IntegrationDecision decision;
  TimeSeries current = series;
  for (int d = 0; d <= max_order; ++d) {
    const DeterministicSpec spec = d == 0 ? DeterministicSpec::constant_and_trend
                                          : DeterministicSpec::constant;
    const int feasible_lag = std::min<Eigen::Index>(6, (current.size() - 10) / 2);
    IntegrationLevel level;
    level.d = d;
    level.adf = adf(current, spec, std::max(0, (int)feasible_lag));
    level.pp = pp(current, spec);
    level.kpss = kpss(current, spec);

    const bool adf_stationary = level.adf.reject_at_5pct;
    const bool kpss_stationary = !level.kpss.reject_at_5pct;
    if (adf_stationary && kpss_stationary) {
      level.verdict = "stationary";
      decision.levels.push_back(level);
      decision.order = d;
      return decision;
    }
    level.verdict =
        adf_stationary == kpss_stationary ? "nonstationary" : "ambiguous";
    decision.levels.push_back(level);

    if (d < max_order) current = difference(current, 1);
  }
  decision.order = max_order;
  decision.capped = true;
  return decision;
}

}  // namespace cfvc
