#include "cfvc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfvc {

namespace {

constexpr double kRankTolerance = 1e-10;

// Regularized lower incomplete gamma via its power series, valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n <= 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) {
      return sum * std::exp(a * std::log(x) - x - std::lgamma(a));
    }
  }
  throw NoConvergence("incomplete gamma series did not converge");
}

// Regularized upper incomplete gamma via a continued fraction (modified
// Lentz), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return h * std::exp(a * std::log(x) - x - std::lgamma(a));
    }
  }
  throw NoConvergence("incomplete gamma fraction did not converge");
}

// Upper tail of the gamma(a) distribution, regularized.
double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_fraction(double a, double b, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 1000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return h;
  }
  throw NoConvergence("incomplete beta fraction did not converge");
}

// Regularized incomplete beta I_x(a, b).
double beta_i(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

OlsFit ols(const Eigen::Ref<const Matrix>& design,
           const Eigen::Ref<const Vector>& response) {
  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();
  if (response.size() != n) {
    throw DimensionMismatch("ols: design rows != response length");
  }
  if (k == 0 || n <= k) {
    throw DimensionMismatch("ols: need more observations than regressors");
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  const Matrix r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const double dmax = r.diagonal().cwiseAbs().maxCoeff();
  const double dmin = r.diagonal().cwiseAbs().minCoeff();
  if (dmax <= 0.0 || dmin < kRankTolerance * dmax) {
    throw RankDeficient("ols: design matrix is numerically rank deficient");
  }

  OlsFit fit;
  fit.coefficients = qr.solve(response);
  fit.residuals = response - design * fit.coefficients;
  fit.rss = fit.residuals.squaredNorm();
  fit.dof = n - k;
  fit.sigma2 = fit.rss / static_cast<double>(fit.dof);

  const Matrix rinv =
      r.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Matrix perm = qr.colsPermutation();
  fit.coefficient_covariance =
      fit.sigma2 * (perm * (rinv * rinv.transpose()) * perm.transpose());
  return fit;
}

std::vector<std::complex<double>> eigen_general(const Eigen::Ref<const Matrix>& a) {
  if (a.rows() != a.cols()) {
    throw NonSquare("eigen_general: matrix is not square");
  }
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("eigen_general: QR iteration failed");
  }
  const auto values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

GeneralizedEigen eigen_symmetric_generalized(const Eigen::Ref<const Matrix>& a,
                                             const Eigen::Ref<const Matrix>& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw NonSquare("eigen_symmetric_generalized: inputs must be square");
  }
  if (a.rows() != b.rows()) {
    throw DimensionMismatch("eigen_symmetric_generalized: size mismatch");
  }
  if (Eigen::LLT<Matrix>(b).info() != Eigen::Success) {
    throw NotPositiveDefinite(
        "eigen_symmetric_generalized: right-hand matrix is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(a, b);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("eigen_symmetric_generalized: iteration failed");
  }

  GeneralizedEigen out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix cholesky_lower(const Eigen::Ref<const Matrix>& sigma) {
  if (sigma.rows() != sigma.cols()) {
    throw NonSquare("cholesky_lower: matrix is not square");
  }
  const double scale = sigma.cwiseAbs().maxCoeff();
  if (scale > 0.0 &&
      (sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NotPositiveDefinite("cholesky_lower: matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("cholesky_lower: matrix is not positive definite");
  }
  return llt.matrixL();
}

double quantile_type7(std::vector<double> values, double q) {
  if (values.empty()) throw EmptyInput("quantile_type7: no values");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error("quantile_type7: q must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double dist_sf(Dist kind, double x, double dof1, double dof2) {
  if (!std::isfinite(x)) {
    throw Error("dist_sf: x is not finite");
  }
  switch (kind) {
    case Dist::chi_square:
      if (dof1 <= 0.0) throw InvalidDof("dist_sf: chi-square dof must be > 0");
      return gamma_q(0.5 * dof1, 0.5 * x);
    case Dist::f: {
      if (dof1 <= 0.0 || dof2 <= 0.0) {
        throw InvalidDof("dist_sf: F dof must be > 0");
      }
      if (x <= 0.0) return 1.0;
      return beta_i(0.5 * dof2, 0.5 * dof1, dof2 / (dof2 + dof1 * x));
    }
    case Dist::student_t: {
      if (dof1 <= 0.0) throw InvalidDof("dist_sf: t dof must be > 0");
      if (x == 0.0) return 0.5;
      const double tail =
          0.5 * beta_i(0.5 * dof1, 0.5, dof1 / (dof1 + x * x));
      return x > 0.0 ? tail : 1.0 - tail;
    }
    case Dist::standard_normal:
      return 0.5 * std::erfc(x / std::sqrt(2.0));
  }
  throw Error("dist_sf: unknown distribution");
}

}  // namespace cfvc
