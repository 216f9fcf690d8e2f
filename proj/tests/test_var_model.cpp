#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfvc/var_model.hpp"
#include "support/fixtures.hpp"

using cfvc::DeterministicSpec;
using cfvc::Matrix;
using cfvc::VarModel;
using cfvc::Vector;

// Coefficients and criteria below were frozen from an independent
// reference fit of the committed fixtures.

TEST_CASE("var(2) coefficients match the frozen reference") {
  const auto pair = fixtures::load("var1_240");
  const VarModel model = fit_var(pair, 2, DeterministicSpec::constant);

  CHECK(model.t_eff == 238);
  CHECK(model.params.rows() == 5);
  CHECK(model.params.cols() == 2);

  const double expected[5][2] = {
      {0.041876248333469514, -0.05905805858252511},
      {0.5074626199155364, 0.04468575459300124},
      {0.19902749413391058, 0.3599995751451059},
      {-0.06954595066011128, 0.07853130638592694},
      {-0.013528292313246612, -0.026151477730093797},
  };
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(model.params(r, c) == doctest::Approx(expected[r][c]).epsilon(1e-10));
    }
  }

  // lag matrices are the transposed parameter blocks
  CHECK(model.coefficient_matrices[0](0, 0) == doctest::Approx(expected[1][0]));
  CHECK(model.coefficient_matrices[0](0, 1) == doctest::Approx(expected[2][0]));
  CHECK(model.coefficient_matrices[0](1, 0) == doctest::Approx(expected[1][1]));
  CHECK(model.coefficient_matrices[1](0, 0) == doctest::Approx(expected[3][0]));
  CHECK(model.intercepts(0) == doctest::Approx(expected[0][0]));

  const auto ic = information_criteria(model);
  CHECK(ic.aic == doctest::Approx(-0.0791720466155373).epsilon(1e-10));
  CHECK(ic.bic_sic == doctest::Approx(0.06672167916897848).epsilon(1e-10));
  CHECK(ic.fpe == doctest::Approx(0.9238923850574599).epsilon(1e-10));
}

TEST_CASE("fitted var satisfies its own normal equations") {
  const auto pair = fixtures::load("var2_240");
  const VarModel model =
      fit_var(pair, 3, DeterministicSpec::constant_and_trend);

  // residual columns orthogonal to every regressor: check via the moment
  // identity Z'E = 0 reconstructed from data
  const Eigen::Index n = model.data.rows();
  const int ntrend = 2;
  Matrix z(model.t_eff, ntrend + 2 * 3);
  for (Eigen::Index r = 0; r < model.t_eff; ++r) {
    const Eigen::Index t = 3 + r;
    z(r, 0) = 1.0;
    z(r, 1) = (double)(3 + 1 + r);
    for (int j = 1; j <= 3; ++j) {
      z(r, ntrend + (j - 1) * 2 + 0) = model.data(t - j, 0);
      z(r, ntrend + (j - 1) * 2 + 1) = model.data(t - j, 1);
    }
  }
  CHECK((z.transpose() * model.residuals).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(model.t_eff == n - 3);

  // covariance definitions
  const Matrix sse = model.residuals.transpose() * model.residuals;
  CHECK((model.sigma_u * (double)(model.t_eff - 8) - sse).cwiseAbs().maxCoeff() <
        1e-9);
  CHECK((model.sigma_u_mle * (double)model.t_eff - sse).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("misaligned or oversized inputs are rejected") {
  const auto pair = fixtures::load("var1_240");
  const cfvc::TimeSeries shifted("z", pair[0].start().plus(1),
                                 pair[0].values());
  CHECK_THROWS_AS(fit_var({pair[0], shifted}, 2, DeterministicSpec::constant),
                  cfvc::Misaligned);

  const cfvc::TimeSeries tiny_a("a", {2000, 1}, Vector::LinSpaced(12, 0, 1));
  const cfvc::TimeSeries tiny_b("b", {2000, 1},
                                Vector::LinSpaced(12, 1, 0).cwiseAbs2());
  CHECK_THROWS_AS(fit_var({tiny_a, tiny_b}, 4, DeterministicSpec::constant),
                  cfvc::SeriesTooShort);
}

TEST_CASE("ljung box matches the frozen reference") {
  const auto pair = fixtures::load("ar_pair_240");
  const auto lb = cfvc::ljung_box(pair[0].values(), 10, 0);
  CHECK(lb.statistic == doctest::Approx(67.48280269228074).epsilon(1e-10));
  CHECK(lb.dof == 10);
  CHECK(lb.p_value == doctest::Approx(1.3542921896099995e-10).epsilon(1e-6));

  // dof floor
  const auto floored = cfvc::ljung_box(pair[0].values(), 2, 5);
  CHECK(floored.dof == 1);

  CHECK_THROWS_AS(cfvc::ljung_box(Vector::Ones(8), 10, 0),
                  cfvc::SeriesTooShort);
}

TEST_CASE("stability roots sit inside the unit circle for a stable fit") {
  const auto pair = fixtures::load("var1_240");
  const VarModel model = fit_var(pair, 1, DeterministicSpec::constant);
  const auto roots = stability_roots(model);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] >= roots[1]);
  CHECK(roots[0] < 1.0);
  // the generating process has eigenvalues 0.5 and 0.4
  CHECK(roots[0] == doctest::Approx(0.5).epsilon(0.2));

  const auto rw = fixtures::load("rw_pair_240");
  const VarModel walk = fit_var(rw, 1, DeterministicSpec::constant);
  CHECK(stability_roots(walk)[0] > 0.9);
}

TEST_CASE("select_lag recovers the order of a var(2) process") {
  const auto pair = fixtures::load("var2_240");
  const auto sel = select_lag(pair, 6, DeterministicSpec::constant);
  CHECK(sel.chosen_m == 2);
  CHECK_FALSE(sel.diagnostics_violated);
  CHECK(sel.candidates.size() == 6);
  CHECK(sel.rationale.find("lag 2") != std::string::npos);

  // candidate table is monotone in m for the common sample size
  for (const auto& row : sel.candidates) {
    CHECK(row.stable);
    CHECK(row.ljung_box_min_p >= 0.0);
  }

  // criteria minimizers at m=2 on this fixture
  double best_aic = 1e300, best_bic = 1e300, best_fpe = 1e300;
  int aic_m = 0, bic_m = 0, fpe_m = 0;
  for (const auto& row : sel.candidates) {
    if (row.criteria.aic < best_aic) { best_aic = row.criteria.aic; aic_m = row.m; }
    if (row.criteria.bic_sic < best_bic) { best_bic = row.criteria.bic_sic; bic_m = row.m; }
    if (row.criteria.fpe < best_fpe) { best_fpe = row.criteria.fpe; fpe_m = row.m; }
  }
  CHECK(aic_m == 2);
  CHECK(bic_m == 2);
  CHECK(fpe_m == 2);
}
