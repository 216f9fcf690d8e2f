#include "cfvc/var_model.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace cfvc {

namespace {

double log_det_spd(const Matrix& a, const char* what) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite(std::string(what) +
                              ": covariance is not positive definite");
  }
  const Matrix l = llt.matrixL();
  return 2.0 * l.diagonal().array().log().sum();
}

void check_alignment(const std::vector<TimeSeries>& series) {
  if (series.empty()) throw EmptyInput("fit_var: no series given");
  std::set<std::string> labels;
  for (const auto& s : series) {
    if (!(s.start() == series.front().start()) ||
        s.size() != series.front().size()) {
      throw Misaligned("fit_var: series cover different months");
    }
    if (!labels.insert(s.label()).second) {
      throw Error("fit_var: duplicate series label '" + s.label() + "'");
    }
  }
}

}  // namespace

int VarModel::ntrend() const {
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

VarModel fit_var(const std::vector<TimeSeries>& series, int m,
                 DeterministicSpec spec, int offset) {
  check_alignment(series);
  if (m < 1) throw Error("fit_var: lag order must be >= 1");
  if (offset < 0) throw Error("fit_var: offset must be >= 0");

  VarModel model;
  model.k = (int)series.size();
  model.m = m;
  model.offset = offset;
  model.spec = spec;
  model.start = series.front().start();

  const Eigen::Index n = series.front().size();
  const int k = model.k;
  const int ntrend = model.ntrend();
  model.data.resize(n, k);
  for (int i = 0; i < k; ++i) {
    model.variable_names.push_back(series[(std::size_t)i].label());
    model.data.col(i) = series[(std::size_t)i].values();
  }

  const Eigen::Index t_eff = n - offset - m;
  const int ncols = ntrend + k * m;
  if (t_eff < ncols + 4) {
    throw SeriesTooShort("fit_var: " + std::to_string(t_eff) +
                         " effective observations cannot support " +
                         std::to_string(ncols) + " parameters per equation");
  }
  model.t_eff = t_eff;

  // Stacked design: deterministics first, then lag blocks.  Row r explains
  // observation offset + m + r; the trend column ignores the offset so
  // that order-selection refits only shift the intercept.
  Matrix z(t_eff, ncols);
  Matrix y_sample(t_eff, k);
  for (Eigen::Index r = 0; r < t_eff; ++r) {
    const Eigen::Index t = offset + m + r;
    if (ntrend > 0) z(r, 0) = 1.0;
    if (ntrend > 1) z(r, 1) = (double)(m + 1 + r);
    for (int j = 1; j <= m; ++j) {
      for (int i = 0; i < k; ++i) {
        z(r, ntrend + (j - 1) * k + i) = model.data(t - j, i);
      }
    }
    y_sample.row(r) = model.data.row(t);
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(z);
  const Matrix rfac =
      qr.matrixR().topLeftCorner(ncols, ncols).triangularView<Eigen::Upper>();
  const double dmax = rfac.diagonal().cwiseAbs().maxCoeff();
  const double dmin = rfac.diagonal().cwiseAbs().minCoeff();
  if (dmax <= 0.0 || dmin < 1e-10 * dmax) {
    throw RankDeficient("fit_var: the lag design matrix is rank deficient");
  }

  model.params = qr.solve(y_sample);
  model.residuals = y_sample - z * model.params;

  const Matrix rinv =
      rfac.triangularView<Eigen::Upper>().solve(Matrix::Identity(ncols, ncols));
  const Matrix perm = qr.colsPermutation();
  model.zz_inverse = perm * (rinv * rinv.transpose()) * perm.transpose();

  const Eigen::Index df_resid = t_eff - ncols;
  const Matrix sse = model.residuals.transpose() * model.residuals;
  model.sigma_u = sse / (double)df_resid;
  model.sigma_u_mle = sse / (double)t_eff;

  model.intercepts = ntrend > 0 ? model.params.row(0).transpose()
                                : Vector::Zero(k).eval();
  model.trend_coeffs = ntrend > 1 ? model.params.row(1).transpose()
                                  : Vector::Zero(k).eval();
  for (int j = 0; j < m; ++j) {
    model.coefficient_matrices.push_back(
        model.params.middleRows(ntrend + j * k, k).transpose());
  }
  return model;
}

InformationCriteria information_criteria(const VarModel& model) {
  const double nobs = (double)model.t_eff;
  const double free_params =
      (double)model.m * model.k * model.k + (double)model.k * model.ntrend();
  const double ld = log_det_spd(model.sigma_u_mle, "information_criteria");

  const double df_model = (double)model.params_per_equation();
  const double df_resid = nobs - df_model;

  InformationCriteria ic;
  ic.aic = ld + 2.0 / nobs * free_params;
  ic.bic_sic = ld + std::log(nobs) / nobs * free_params;
  ic.fpe = std::pow((nobs + df_model) / df_resid, model.k) * std::exp(ld);
  return ic;
}

LjungBoxResult ljung_box(const Vector& residuals, int h, int fitted_params) {
  const Eigen::Index n = residuals.size();
  if (h < 1) throw Error("ljung_box: need h >= 1");
  if (fitted_params < 0) throw Error("ljung_box: fitted_params must be >= 0");
  if (n <= h + fitted_params) {
    throw SeriesTooShort("ljung_box: " + std::to_string(n) +
                         " residuals cannot support horizon " +
                         std::to_string(h));
  }

  const Vector centered = residuals.array() - residuals.mean();
  const double denom = centered.squaredNorm();
  if (denom <= 0.0) throw ConstantSeries("ljung_box: residuals are constant");

  const double nn = (double)n;
  double q = 0.0;
  for (int j = 1; j <= h; ++j) {
    const double r = centered.tail(n - j).dot(centered.head(n - j)) / denom;
    q += r * r / (nn - j);
  }
  q *= nn * (nn + 2.0);

  LjungBoxResult out;
  out.statistic = q;
  out.dof = std::max(1, h - fitted_params);
  out.p_value = dist_sf(Dist::chi_square, q, (double)out.dof);
  return out;
}

std::vector<double> stability_roots(const VarModel& model) {
  const int km = model.k * model.m;
  Matrix companion = Matrix::Zero(km, km);
  for (int j = 0; j < model.m; ++j) {
    companion.block(0, j * model.k, model.k, model.k) =
        model.coefficient_matrices[(std::size_t)j];
  }
  if (model.m > 1) {
    companion.block(model.k, 0, km - model.k, km - model.k)
        .setIdentity();
  }
  std::vector<double> moduli;
  for (const auto& z : eigen_general(companion)) {
    moduli.push_back(std::abs(z));
  }
  std::sort(moduli.rbegin(), moduli.rend());
  return moduli;
}

LagSelection select_lag(const std::vector<TimeSeries>& series, int max_lag,
                        DeterministicSpec spec) {
  if (max_lag < 1) throw Error("select_lag: max_lag must be >= 1");

  LagSelection sel;
  double best_aic = std::numeric_limits<double>::infinity();
  double best_bic = std::numeric_limits<double>::infinity();
  double best_fpe = std::numeric_limits<double>::infinity();
  int aic_m = 0, bic_m = 0, fpe_m = 0;

  for (int m = 1; m <= max_lag; ++m) {
    const VarModel model = fit_var(series, m, spec, max_lag - m);
    LagCandidate row;
    row.m = m;
    row.criteria = information_criteria(model);

    double min_p = 1.0;
    const int fitted = model.k * model.m;
    const int h = std::min<int>(12, (int)model.t_eff - fitted - 1);
    if (h < 1) {
      min_p = 0.0;
    } else {
      for (int i = 0; i < model.k; ++i) {
        min_p = std::min(min_p,
                         ljung_box(model.residuals.col(i), h, fitted).p_value);
      }
    }
    row.ljung_box_min_p = min_p;

    const auto roots = stability_roots(model);
    row.stable = roots.empty() || roots.front() < 1.0;
    sel.candidates.push_back(row);

    if (row.criteria.aic < best_aic) {
      best_aic = row.criteria.aic;
      aic_m = m;
    }
    if (row.criteria.bic_sic < best_bic) {
      best_bic = row.criteria.bic_sic;
      bic_m = m;
    }
    if (row.criteria.fpe < best_fpe) {
      best_fpe = row.criteria.fpe;
      fpe_m = m;
    }
  }

  std::set<int> minimizers{aic_m, bic_m, fpe_m};
  int chosen = 0;
  for (int m : minimizers) {
    const auto& row = sel.candidates[(std::size_t)(m - 1)];
    if (row.stable && row.ljung_box_min_p > 0.05) {
      chosen = m;
      break;
    }
  }

  std::ostringstream why;
  if (chosen > 0) {
    sel.chosen_m = chosen;
    why << "lag " << chosen << " minimizes {";
    bool first = true;
    if (aic_m == chosen) {
      why << "AIC";
      first = false;
    }
    if (bic_m == chosen) {
      why << (first ? "" : ", ") << "BIC";
      first = false;
    }
    if (fpe_m == chosen) {
      why << (first ? "" : ", ") << "FPE";
    }
    why << "} and passes the residual diagnostics";
  } else {
    sel.chosen_m = bic_m;
    sel.diagnostics_violated = true;
    why << "no criterion minimizer passes the residual diagnostics; "
        << "falling back to the BIC minimizer, lag " << bic_m;
  }
  sel.rationale = why.str();
  return sel;
}

}  // namespace cfvc
