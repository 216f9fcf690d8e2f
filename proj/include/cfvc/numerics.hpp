#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cfvc/errors.hpp"

namespace cfvc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Result of a least-squares fit.  Covariance and sigma2 use the
/// degrees-of-freedom-adjusted residual variance s^2 = RSS / (n - k).
struct OlsFit {
  Vector coefficients;
  Vector residuals;
  double rss = 0.0;
  double sigma2 = 0.0;
  Matrix coefficient_covariance;
  Eigen::Index dof = 0;
};

/// Ordinary least squares via column-pivoted QR.
///
/// Throws DimensionMismatch when rows do not line up or the system is
/// underdetermined, RankDeficient when the R factor's diagonal collapses
/// below a 1e-10 relative threshold.
OlsFit ols(const Eigen::Ref<const Matrix>& design,
           const Eigen::Ref<const Vector>& response);

/// Eigenvalues of a general real square matrix (possibly complex).
std::vector<std::complex<double>> eigen_general(const Eigen::Ref<const Matrix>& a);

struct GeneralizedEigen {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // columns, b-orthonormal: v' B v = 1
};

/// Solves A v = lambda B v for symmetric A and symmetric positive definite B.
GeneralizedEigen eigen_symmetric_generalized(const Eigen::Ref<const Matrix>& a,
                                             const Eigen::Ref<const Matrix>& b);

/// Lower Cholesky factor L with L L' = sigma.
Matrix cholesky_lower(const Eigen::Ref<const Matrix>& sigma);

enum class Dist { chi_square, f, student_t, standard_normal };

/// Upper tail probability P(X > x).
///
/// dof1 is the (first) degrees-of-freedom parameter, dof2 the denominator
/// dof for the F distribution; both are ignored where not applicable.
double dist_sf(Dist kind, double x, double dof1 = 0.0, double dof2 = 0.0);

/// Sample quantile with linear interpolation between order statistics at
/// h = q (n - 1), the convention R labels type 7.
double quantile_type7(std::vector<double> values, double q);

}  // namespace cfvc
