#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfvc/irf.hpp"
#include "support/fixtures.hpp"

using cfvc::DeterministicSpec;
using cfvc::IrfResult;
using cfvc::Matrix;
using cfvc::VarModel;

namespace {

const IrfResult& pick(const std::vector<IrfResult>& all,
                      const std::string& impulse, const std::string& response) {
  for (const auto& r : all) {
    if (r.impulse == impulse && r.response == response) return r;
  }
  throw std::runtime_error("pair not found");
}

}  // namespace

TEST_CASE("var(1) point irf equals powers of the coefficient matrix") {
  const auto pair = fixtures::load("var1_240");
  const VarModel model = fit_var(pair, 1, DeterministicSpec::constant);
  const Matrix a = model.coefficient_matrices[0];
  const Matrix p = cfvc::cholesky_lower(model.sigma_u);

  const auto irfs =
      irf_point(model, model.variable_names, 10, /*cumulative=*/false);
  REQUIRE(irfs.size() == 4);

  Matrix power = Matrix::Identity(2, 2);
  for (int h = 0; h <= 10; ++h) {
    const Matrix theta = power * p;
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        const auto& r = pick(irfs, model.variable_names[(std::size_t)j],
                             model.variable_names[(std::size_t)i]);
        CHECK(std::abs(r.point(h) - theta(i, j)) < 1e-10);
      }
    }
    power = (a * power).eval();
  }
}

TEST_CASE("cumulative irf of a stable var flattens at long horizons") {
  const auto pair = fixtures::load("var1_240");
  const VarModel model = fit_var(pair, 2, DeterministicSpec::constant);
  const auto irfs = irf_point(model, model.variable_names, 200, true);
  for (const auto& r : irfs) {
    CHECK(std::abs(r.point(200) - r.point(199)) <= 1e-6);
  }
}

TEST_CASE("identification is recursive in the requested ordering") {
  const auto pair = fixtures::load("var1_240");
  const VarModel model = fit_var(pair, 1, DeterministicSpec::constant);

  const auto irfs = irf_point(model, {"y1", "y2"}, 2, false);
  // at impact the second shock cannot move the first variable
  CHECK(pick(irfs, "y2", "y1").point(0) == 0.0);
  CHECK(pick(irfs, "y1", "y1").point(0) > 0.0);

  const auto flipped = irf_point(model, {"y2", "y1"}, 2, false);
  CHECK(pick(flipped, "y1", "y2").point(0) == 0.0);

  CHECK_THROWS_AS(irf_point(model, {"y1", "nope"}, 2, false),
                  cfvc::BadOrdering);
  CHECK_THROWS_AS(irf_point(model, {"y1", "y1"}, 2, false), cfvc::BadOrdering);
}

TEST_CASE("bootstrap bands are deterministic, ordered and seed sensitive") {
  const auto pair = fixtures::load("var1_240");
  const VarModel model = fit_var(pair, 1, DeterministicSpec::constant);

  const auto run1 = irf_bootstrap(model, model.variable_names, 8, 200, 0.95,
                                  2024, true);
  const auto run2 = irf_bootstrap(model, model.variable_names, 8, 200, 0.95,
                                  2024, true);
  const auto run3 = irf_bootstrap(model, model.variable_names, 8, 200, 0.95,
                                  999, true);

  REQUIRE(run1.size() == 4);
  bool any_band_differs = false;
  for (std::size_t i = 0; i < run1.size(); ++i) {
    CHECK((run1[i].lower - run2[i].lower).cwiseAbs().maxCoeff() == 0.0);
    CHECK((run1[i].upper - run2[i].upper).cwiseAbs().maxCoeff() == 0.0);
    CHECK((run1[i].point - run2[i].point).cwiseAbs().maxCoeff() == 0.0);
    for (int h = 0; h <= 8; ++h) {
      CHECK(run1[i].lower(h) <= run1[i].upper(h));
    }
    if ((run1[i].lower - run3[i].lower).cwiseAbs().maxCoeff() > 0.0) {
      any_band_differs = true;
    }
    CHECK(run1[i].replications == 200);
    CHECK(run1[i].level == 0.95);
    CHECK(run1[i].discarded < 200);
  }
  CHECK(any_band_differs);
}

TEST_CASE("bootstrap bands bracket the point path of a well-sized sample") {
  const auto pair = fixtures::load("var1_240");
  const VarModel model = fit_var(pair, 1, DeterministicSpec::constant);
  const auto irfs = irf_bootstrap(model, model.variable_names, 6, 300, 0.9,
                                  77, true);
  int inside = 0, total = 0;
  for (const auto& r : irfs) {
    for (int h = 0; h <= 6; ++h) {
      ++total;
      if (r.point(h) >= r.lower(h) && r.point(h) <= r.upper(h)) ++inside;
    }
  }
  // percentile bands around the point estimate should contain it almost
  // everywhere on a healthy fixture
  CHECK((double)inside / total > 0.9);
}
