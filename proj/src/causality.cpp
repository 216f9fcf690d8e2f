#include "cfvc/causality.hpp"

#include <cmath>

namespace cfvc {

namespace {

// Osterwald-Lenum (1992) critical values for the bivariate test, indexed
// [p - r - 1][level], levels ordered 1% / 5% / 10%.  One table per
// deterministic case: none, unrestricted constant, restricted trend.
constexpr double kTraceNone[2][3] = {{6.51, 3.84, 2.86}, {16.31, 12.53, 10.47}};
constexpr double kMaxNone[2][3] = {{6.51, 3.84, 2.86}, {15.69, 11.44, 9.52}};
constexpr double kTraceConst[2][3] = {{6.65, 3.76, 2.69}, {20.04, 15.41, 13.33}};
constexpr double kMaxConst[2][3] = {{6.65, 3.76, 2.69}, {18.63, 14.07, 12.07}};
constexpr double kTraceTrend[2][3] = {{16.26, 12.25, 10.49}, {30.45, 25.32, 22.76}};
constexpr double kMaxTrend[2][3] = {{16.26, 12.25, 10.49}, {23.65, 18.96, 16.85}};

// Removes deterministic terms: order -1 leaves the data alone, 0 removes
// the mean, 1 the fitted linear trend.
Matrix detrend(const Matrix& x, int order) {
  if (order < 0) return x;
  if (order == 0) return x.rowwise() - x.colwise().mean();
  const Eigen::Index n = x.rows();
  Matrix d(n, 2);
  d.col(0).setOnes();
  d.col(1) = Vector::LinSpaced(n, 1.0, (double)n);
  Matrix out(n, x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    out.col(c) = ols(d, x.col(c)).residuals;
  }
  return out;
}

// Least-squares residuals of every column of y on z.
Matrix residualize(const Matrix& y, const Matrix& z) {
  Eigen::ColPivHouseholderQR<Matrix> qr(z);
  const auto rdiag =
      qr.matrixR().topLeftCorner(z.cols(), z.cols()).diagonal().cwiseAbs();
  if (rdiag.maxCoeff() <= 0.0 ||
      rdiag.minCoeff() < 1e-10 * rdiag.maxCoeff()) {
    throw SingularMoments("johansen: auxiliary regression is rank deficient");
  }
  return y - z * qr.solve(y);
}

}  // namespace

GrangerResult ty_granger(const TimeSeries& effect, const TimeSeries& cause,
                         int m, int d_max, DeterministicSpec spec) {
  if (m < 1) throw Error("ty_granger: m must be >= 1");
  if (d_max < 0) throw Error("ty_granger: d_max must be >= 0");

  const int p_total = m + d_max;
  const VarModel model = fit_var({effect, cause}, p_total, spec);
  const int ntrend = model.ntrend();
  const int k = model.k;

  // Rows of the cause variable's first m lags inside the effect equation.
  std::vector<Eigen::Index> rows;
  for (int j = 1; j <= m; ++j) {
    rows.push_back(ntrend + (j - 1) * k + 1);
  }

  Vector gamma(m);
  Matrix cov(m, m);
  const double s2 = model.sigma_u(0, 0);
  for (int i = 0; i < m; ++i) {
    gamma(i) = model.params(rows[(std::size_t)i], 0);
    for (int j = 0; j < m; ++j) {
      cov(i, j) =
          s2 * model.zz_inverse(rows[(std::size_t)i], rows[(std::size_t)j]);
    }
  }

  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw SingularMoments("ty_granger: restriction covariance is singular");
  }

  GrangerResult out;
  out.cause = cause.label();
  out.effect = effect.label();
  out.m = m;
  out.d_max = d_max;
  out.dof = m;
  out.wald_statistic = gamma.dot(llt.solve(gamma));
  out.p_value = dist_sf(Dist::chi_square, out.wald_statistic, (double)m);
  out.reject_at_1pct = out.p_value < 0.01;
  out.reject_at_5pct = out.p_value < 0.05;
  out.reject_at_10pct = out.p_value < 0.10;
  return out;
}

TyRobustness ty_robustness(const TimeSeries& effect, const TimeSeries& cause,
                           int m, int d_max, DeterministicSpec spec) {
  TyRobustness out;
  out.center = ty_granger(effect, cause, m, d_max, spec);
  if (m > 1) {
    out.lower = ty_granger(effect, cause, m - 1, d_max, spec);
  }
  try {
    out.upper = ty_granger(effect, cause, m + 1, d_max, spec);
  } catch (const SeriesTooShort&) {
    // m + 1 does not fit in the sample; report the window one-sided
  }

  const bool center5 = out.center.reject_at_5pct;
  out.volatile_ = (out.lower && out.lower->reject_at_5pct != center5) ||
                  (out.upper && out.upper->reject_at_5pct != center5);
  return out;
}

JohansenResult johansen(const TimeSeries& a, const TimeSeries& b, int lag,
                        DeterministicSpec spec) {
  if (lag < 2) throw Error("johansen: lag must be >= 2");
  if (!(a.start() == b.start()) || a.size() != b.size()) {
    throw Misaligned("johansen: series cover different months");
  }
  const int k_diff = lag - 1;
  const Eigen::Index n = a.size();
  if (n - 1 - k_diff < 2 * k_diff + 6) {
    throw SeriesTooShort("johansen: sample too short for lag " +
                         std::to_string(lag));
  }

  const int det_order = spec == DeterministicSpec::none ? -1
                        : spec == DeterministicSpec::constant ? 0
                                                              : 1;
  const int f = det_order > -1 ? 0 : -1;

  Matrix levels(n, 2);
  levels.col(0) = a.values();
  levels.col(1) = b.values();
  levels = detrend(levels, det_order);

  const Matrix dx_all = levels.bottomRows(n - 1) - levels.topRows(n - 1);
  const Eigen::Index rows = n - 1 - k_diff;

  Matrix z(rows, 2 * k_diff);
  for (int j = 1; j <= k_diff; ++j) {
    z.middleCols(2 * (j - 1), 2) = dx_all.middleRows(k_diff - j, rows);
  }
  z = detrend(z, f);
  const Matrix dx = detrend(dx_all.bottomRows(rows).eval(), f);
  const Matrix lx = detrend(levels.middleRows(1, rows).eval(), f);

  const Matrix r0t = residualize(dx, z);
  const Matrix rkt = residualize(lx, z);

  const double t_rows = (double)rows;
  const Matrix skk = rkt.transpose() * rkt / t_rows;
  const Matrix sk0 = rkt.transpose() * r0t / t_rows;
  const Matrix s00 = r0t.transpose() * r0t / t_rows;

  Eigen::LLT<Matrix> s00_llt(s00);
  if (s00_llt.info() != Eigen::Success) {
    throw SingularMoments("johansen: short-run moment matrix is singular");
  }
  const Matrix sig = sk0 * s00_llt.solve(sk0.transpose());
  GeneralizedEigen eigen;
  try {
    eigen = eigen_symmetric_generalized(sig, skk);
  } catch (const NotPositiveDefinite&) {
    throw SingularMoments("johansen: level moment matrix is singular");
  }

  JohansenResult out;
  out.variable_names = {a.label(), b.label()};
  out.lag = lag;
  out.spec = spec;
  out.sample_size = rows;
  out.eigenvalues = eigen.eigenvalues;

  const double t_scale = (double)out.sample_size;
  out.trace_statistics.resize(2);
  out.max_eig_statistics.resize(2);
  for (int r = 0; r < 2; ++r) {
    double sum = 0.0;
    for (int i = r; i < 2; ++i) {
      const double one_minus = 1.0 - out.eigenvalues(i);
      if (one_minus <= 0.0) {
        throw Error("johansen: an eigenvalue reached one");
      }
      sum += std::log(one_minus);
    }
    out.trace_statistics(r) = -t_scale * sum;
    out.max_eig_statistics(r) =
        -t_scale * std::log(1.0 - out.eigenvalues(r));
  }

  for (int r = 0; r < 2; ++r) {
    out.trace_critical_values.push_back(
        {johansen_critical_value(JohansenStat::trace, r, 0.01, spec),
         johansen_critical_value(JohansenStat::trace, r, 0.05, spec),
         johansen_critical_value(JohansenStat::trace, r, 0.10, spec)});
    out.max_eig_critical_values.push_back(
        {johansen_critical_value(JohansenStat::max_eig, r, 0.01, spec),
         johansen_critical_value(JohansenStat::max_eig, r, 0.05, spec),
         johansen_critical_value(JohansenStat::max_eig, r, 0.10, spec)});
  }

  out.concluded_rank = 2;
  for (int r = 0; r < 2; ++r) {
    if (out.trace_statistics(r) < out.trace_critical_values[(std::size_t)r].pct5) {
      out.concluded_rank = r;
      break;
    }
  }
  return out;
}

double johansen_critical_value(JohansenStat kind, int null_rank, double level,
                               DeterministicSpec spec) {
  if (null_rank < 0 || null_rank > 1) {
    throw UnsupportedSpec("johansen_critical_value: null rank must be 0 or 1");
  }
  int level_idx = -1;
  if (level == 0.01) level_idx = 0;
  if (level == 0.05) level_idx = 1;
  if (level == 0.10) level_idx = 2;
  if (level_idx < 0) {
    throw UnsupportedSpec(
        "johansen_critical_value: level must be 0.01, 0.05 or 0.10");
  }

  const int pr = 2 - null_rank;  // p - r
  const bool trace = kind == JohansenStat::trace;
  switch (spec) {
    case DeterministicSpec::none:
      return (trace ? kTraceNone : kMaxNone)[pr - 1][level_idx];
    case DeterministicSpec::constant:
      return (trace ? kTraceConst : kMaxConst)[pr - 1][level_idx];
    case DeterministicSpec::constant_and_trend:
      return (trace ? kTraceTrend : kMaxTrend)[pr - 1][level_idx];
  }
  throw UnsupportedSpec("johansen_critical_value: unknown deterministic case");
}

}  // namespace cfvc
