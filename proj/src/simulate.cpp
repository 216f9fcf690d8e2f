#include "cfvc/simulate.hpp"

#include <cmath>
#include <string>

namespace cfvc {

namespace {

constexpr int kBurnIn = 100;
const YearMonth kSimStart{2000, 1};

void require_length(int n) {
  if (n < 10) {
    throw SeriesTooShort("generate: need n >= 10, got " + std::to_string(n));
  }
}

// Largest companion-matrix root modulus for stacked lag matrices.
double top_root_modulus(const std::vector<Matrix>& lags) {
  const Eigen::Index k = lags.front().rows();
  const Eigen::Index m = (Eigen::Index)lags.size();
  Matrix companion = Matrix::Zero(k * m, k * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    companion.block(0, j * k, k, k) = lags[(std::size_t)j];
  }
  if (m > 1) {
    companion.block(k, 0, k * (m - 1), k * (m - 1)) =
        Matrix::Identity(k * (m - 1), k * (m - 1));
  }
  double top = 0.0;
  for (const auto& z : eigen_general(companion)) top = std::max(top, std::abs(z));
  return top;
}

void require_stable(const std::vector<Matrix>& lags, const char* what) {
  if (top_root_modulus(lags) >= 1.0) {
    throw UnstableParameters(std::string(what) +
                             ": a companion root is on or outside the unit circle");
  }
}

std::vector<TimeSeries> simulate_var(const std::vector<Matrix>& lags, int n,
                                     double scale, GaussianRng& rng,
                                     std::vector<std::string> labels) {
  const Eigen::Index k = lags.front().rows();
  const Eigen::Index m = (Eigen::Index)lags.size();
  const int total = n + kBurnIn;
  Matrix path = Matrix::Zero(total + m, k);
  for (int t = (int)m; t < total + (int)m; ++t) {
    Vector next(k);
    for (Eigen::Index i = 0; i < k; ++i) next(i) = scale * rng.normal();
    for (Eigen::Index j = 0; j < m; ++j) {
      next += lags[(std::size_t)j] * path.row(t - 1 - j).transpose();
    }
    path.row(t) = next.transpose();
  }
  std::vector<TimeSeries> out;
  out.reserve((std::size_t)k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.emplace_back(labels[(std::size_t)i], kSimStart,
                     path.col(i).segment(m + kBurnIn, n).eval());
  }
  return out;
}

}  // namespace

Dgp Dgp::white_noise(int n, std::uint64_t seed, double scale) {
  Dgp d;
  d.kind = DgpKind::white_noise;
  d.n = n;
  d.seed = seed;
  d.noise_scale = scale;
  return d;
}

Dgp Dgp::ar(std::vector<double> coeffs, int n, std::uint64_t seed, double scale) {
  Dgp d;
  d.kind = DgpKind::ar;
  d.ar_coeffs = std::move(coeffs);
  d.n = n;
  d.seed = seed;
  d.noise_scale = scale;
  return d;
}

Dgp Dgp::random_walk(int n, std::uint64_t seed, double scale) {
  Dgp d;
  d.kind = DgpKind::random_walk;
  d.n = n;
  d.seed = seed;
  d.noise_scale = scale;
  return d;
}

Dgp Dgp::var(std::vector<Matrix> lag_coeffs, int n, std::uint64_t seed,
             double scale) {
  Dgp d;
  d.kind = DgpKind::var;
  d.var_lag_coeffs = std::move(lag_coeffs);
  d.n = n;
  d.seed = seed;
  d.noise_scale = scale;
  return d;
}

Dgp Dgp::cointegrated_pair(int n, std::uint64_t seed, double gap_scale) {
  Dgp d;
  d.kind = DgpKind::cointegrated_pair;
  d.n = n;
  d.seed = seed;
  d.gap_scale = gap_scale;
  return d;
}

Dgp Dgp::causal_pair(int n, std::uint64_t seed) {
  Dgp d;
  d.kind = DgpKind::causal_pair;
  d.n = n;
  d.seed = seed;
  return d;
}

std::vector<TimeSeries> generate(const Dgp& dgp) {
  require_length(dgp.n);
  GaussianRng rng(dgp.seed);

  switch (dgp.kind) {
    case DgpKind::white_noise: {
      Vector v(dgp.n);
      for (int t = 0; t < kBurnIn; ++t) (void)rng.normal();
      for (int t = 0; t < dgp.n; ++t) v(t) = dgp.noise_scale * rng.normal();
      return {TimeSeries("wn", kSimStart, std::move(v))};
    }

    case DgpKind::ar: {
      if (dgp.ar_coeffs.empty()) {
        throw Error("generate: ar process needs at least one coefficient");
      }
      const int p = (int)dgp.ar_coeffs.size();
      Matrix a(1, 1);
      std::vector<Matrix> lags;
      for (double phi : dgp.ar_coeffs) {
        a(0, 0) = phi;
        lags.push_back(a);
      }
      require_stable(lags, "ar");
      const int total = dgp.n + kBurnIn;
      std::vector<double> path((std::size_t)(total + p), 0.0);
      for (int t = p; t < total + p; ++t) {
        double v = dgp.noise_scale * rng.normal();
        for (int j = 0; j < p; ++j) {
          v += dgp.ar_coeffs[(std::size_t)j] * path[(std::size_t)(t - 1 - j)];
        }
        path[(std::size_t)t] = v;
      }
      Vector v(dgp.n);
      for (int t = 0; t < dgp.n; ++t) {
        v(t) = path[(std::size_t)(p + kBurnIn + t)];
      }
      return {TimeSeries("ar", kSimStart, std::move(v))};
    }

    case DgpKind::random_walk: {
      Vector v(dgp.n);
      double level = 0.0;
      for (int t = 0; t < dgp.n; ++t) {
        level += dgp.noise_scale * rng.normal();
        v(t) = level;
      }
      return {TimeSeries("rw", kSimStart, std::move(v))};
    }

    case DgpKind::var: {
      if (dgp.var_lag_coeffs.empty()) {
        throw Error("generate: var process needs at least one lag matrix");
      }
      const Eigen::Index k = dgp.var_lag_coeffs.front().rows();
      for (const auto& a : dgp.var_lag_coeffs) {
        if (a.rows() != k || a.cols() != k) {
          throw DimensionMismatch("generate: var lag matrices must share one shape");
        }
      }
      require_stable(dgp.var_lag_coeffs, "var");
      std::vector<std::string> labels;
      for (Eigen::Index i = 0; i < k; ++i) {
        labels.push_back("y" + std::to_string(i + 1));
      }
      return simulate_var(dgp.var_lag_coeffs, dgp.n, dgp.noise_scale, rng,
                          std::move(labels));
    }

    case DgpKind::cointegrated_pair: {
      Vector x(dgp.n), y(dgp.n);
      double level = 0.0;
      for (int t = 0; t < dgp.n; ++t) {
        level += dgp.noise_scale * rng.normal();
        x(t) = level;
        y(t) = level + dgp.gap_scale * rng.normal();
      }
      return {TimeSeries("x", kSimStart, std::move(x)),
              TimeSeries("y", kSimStart, std::move(y))};
    }

    case DgpKind::causal_pair: {
      // x drives y with a one-month lag; x itself is a persistent AR(1).
      Matrix a(2, 2);
      a << 0.9, 0.0, 0.4, 0.5;
      std::vector<Matrix> lags{a};
      require_stable(lags, "causal_pair");
      return simulate_var(lags, dgp.n, dgp.noise_scale, rng, {"x", "y"});
    }
  }
  throw Error("generate: unknown process kind");
}

}  // namespace cfvc
