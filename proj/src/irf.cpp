#include "cfvc/irf.hpp"

#include <algorithm>
#include <cmath>

#include "cfvc/rng.hpp"

namespace cfvc {

namespace {

std::vector<int> ordering_indices(const VarModel& model,
                                  const std::vector<std::string>& ordering) {
  if ((int)ordering.size() != model.k) {
    throw BadOrdering("irf: ordering must name every variable exactly once");
  }
  std::vector<int> idx;
  for (const auto& name : ordering) {
    const auto it = std::find(model.variable_names.begin(),
                              model.variable_names.end(), name);
    if (it == model.variable_names.end()) {
      throw BadOrdering("irf: unknown variable '" + name + "' in ordering");
    }
    const int i = (int)(it - model.variable_names.begin());
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
      throw BadOrdering("irf: variable '" + name + "' repeats in ordering");
    }
    idx.push_back(i);
  }
  return idx;
}

// Theta_h = Psi_h P in the permuted variable order, stacked along rows:
// block h is a k x k matrix with responses in rows, shocks in columns.
std::vector<Matrix> theta_path(const VarModel& model,
                               const std::vector<int>& idx, int horizon,
                               bool cumulative) {
  const int k = model.k;
  Matrix q = Matrix::Zero(k, k);
  for (int p = 0; p < k; ++p) q(p, idx[(std::size_t)p]) = 1.0;

  std::vector<Matrix> a;  // permuted lag matrices
  for (const auto& lag : model.coefficient_matrices) {
    a.push_back(q * lag * q.transpose());
  }
  const Matrix p_chol = cholesky_lower(q * model.sigma_u * q.transpose());

  std::vector<Matrix> psi{Matrix::Identity(k, k)};
  for (int h = 1; h <= horizon; ++h) {
    Matrix next = Matrix::Zero(k, k);
    for (int j = 1; j <= std::min(h, model.m); ++j) {
      next += psi[(std::size_t)(h - j)] * a[(std::size_t)(j - 1)];
    }
    psi.push_back(next);
  }

  std::vector<Matrix> theta;
  for (int h = 0; h <= horizon; ++h) {
    theta.push_back(psi[(std::size_t)h] * p_chol);
  }
  if (cumulative) {
    for (int h = 1; h <= horizon; ++h) {
      theta[(std::size_t)h] += theta[(std::size_t)(h - 1)];
    }
  }
  return theta;
}

}  // namespace

std::vector<IrfResult> irf_point(const VarModel& model,
                                 const std::vector<std::string>& ordering,
                                 int horizon, bool cumulative) {
  if (horizon < 0) throw Error("irf_point: horizon must be >= 0");
  const auto idx = ordering_indices(model, ordering);
  const auto theta = theta_path(model, idx, horizon, cumulative);

  std::vector<IrfResult> out;
  const int k = model.k;
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) {
      IrfResult r;
      r.impulse = ordering[(std::size_t)j];
      r.response = ordering[(std::size_t)i];
      r.horizon = horizon;
      r.cumulative = cumulative;
      r.point.resize(horizon + 1);
      for (int h = 0; h <= horizon; ++h) {
        r.point(h) = theta[(std::size_t)h](i, j);
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<IrfResult> irf_bootstrap(const VarModel& model,
                                     const std::vector<std::string>& ordering,
                                     int horizon, int replications,
                                     double level, std::uint64_t seed,
                                     bool cumulative) {
  if (replications < 1) throw Error("irf_bootstrap: need replications >= 1");
  if (!(level > 0.0 && level < 1.0)) {
    throw Error("irf_bootstrap: level must lie strictly inside (0, 1)");
  }

  auto results = irf_point(model, ordering, horizon, cumulative);
  const auto idx = ordering_indices(model, ordering);

  const int k = model.k;
  const int m = model.m;
  const Eigen::Index n = model.data.rows();
  const Eigen::Index t_eff = model.t_eff;
  const Matrix centered =
      model.residuals.rowwise() - model.residuals.colwise().mean();
  const int ntrend = model.ntrend();

  // sample paths per (impulse, response) pair and horizon step
  std::vector<std::vector<std::vector<double>>> draws(
      (std::size_t)(k * k),
      std::vector<std::vector<double>>((std::size_t)(horizon + 1)));
  int discarded = 0;

  for (int rep = 0; rep < replications; ++rep) {
    GaussianRng rng(derive_stream_seed(seed, (std::uint64_t)rep));
    Matrix regen = model.data;
    for (Eigen::Index t = model.offset + m; t < n; ++t) {
      const auto pick = (Eigen::Index)rng.below((std::uint64_t)t_eff);
      Vector next = centered.row(pick).transpose();
      if (ntrend > 0) next += model.intercepts;
      if (ntrend > 1) {
        next += model.trend_coeffs * (double)(t - model.offset + 1);
      }
      for (int j = 1; j <= m; ++j) {
        next += model.coefficient_matrices[(std::size_t)(j - 1)] *
                regen.row(t - j).transpose();
      }
      regen.row(t) = next.transpose();
    }

    try {
      std::vector<TimeSeries> series;
      for (int i = 0; i < k; ++i) {
        series.emplace_back(model.variable_names[(std::size_t)i], model.start,
                            regen.col(i).eval());
      }
      const VarModel refit = fit_var(series, m, model.spec, model.offset);
      const auto theta = theta_path(refit, idx, horizon, cumulative);
      bool finite = true;
      for (const auto& th : theta) finite = finite && th.allFinite();
      if (!finite) {
        ++discarded;
        continue;
      }
      for (int j = 0; j < k && finite; ++j) {
        for (int i = 0; i < k; ++i) {
          auto& pair_draws = draws[(std::size_t)(j * k + i)];
          for (int h = 0; h <= horizon; ++h) {
            pair_draws[(std::size_t)h].push_back(theta[(std::size_t)h](i, j));
          }
        }
      }
    } catch (const Error&) {
      ++discarded;
    }
  }

  if (discarded == replications) {
    throw Error("irf_bootstrap: every replicate failed to refit");
  }

  const double alpha = 1.0 - level;
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) {
      auto& r = results[(std::size_t)(j * k + i)];
      r.level = level;
      r.replications = replications;
      r.seed = seed;
      r.discarded = discarded;
      r.lower.resize(horizon + 1);
      r.upper.resize(horizon + 1);
      const auto& pair_draws = draws[(std::size_t)(j * k + i)];
      for (int h = 0; h <= horizon; ++h) {
        r.lower(h) = quantile_type7(pair_draws[(std::size_t)h], alpha / 2.0);
        r.upper(h) =
            quantile_type7(pair_draws[(std::size_t)h], 1.0 - alpha / 2.0);
      }
    }
  }
  return results;
}

}  // namespace cfvc
