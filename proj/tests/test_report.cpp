#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cfvc/errors.hpp"
#include "cfvc/report.hpp"

using cfvc::RunReport;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "cfvc_report_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// A report with one row in every table.
RunReport sample_report() {
  RunReport report;
  report.provenance = {"fedcba9876543210", 7, "0.1.0"};
  report.window_start = "2012-04";
  report.window_end = "2015-06";
  report.transforms = {{"correlation", "levels"}, {"unit_root", "log"},
                       {"causality", "log"}, {"cointegration", "log"},
                       {"irf", "log"}};
  report.ingest.push_back({"crowdfunding", 120, 118, 0.95});
  report.descriptives.push_back(
      {"cf_sum", 118, 1.1e6, 9322.0, 4100.5, 6000.0, 9000.0, 12000.0});
  report.series.emplace_back("cf_sum", cfvc::YearMonth{2012, 4},
                             cfvc::Vector::Ones(3) * 5.0);
  report.correlations.push_back(
      {"cf_sum,vc_sum", "cf_sum", "vc_sum", 0.431, 0.006, 39, "***"});
  report.unit_roots.push_back({"cf_sum", 0, "adf", "constant_and_trend",
                               -2.31, -3.53, 1, 37, false});
  report.integration.push_back({"cf_sum", 1, false, "d0=nonstationary, "
                                                    "d1=stationary"});
  cfvc::LagSelectionRow lag_row;
  lag_row.pair = "cf_sum,vc_sum";
  lag_row.chosen_m = 5;
  lag_row.rationale = "lag 5 minimizes {AIC} and passes the residual "
                      "diagnostics";
  lag_row.candidates.push_back({5, -4.2, -3.9, 0.013, 0.41, true});
  report.lag_selection.push_back(lag_row);
  cfvc::GrangerRow granger;
  granger.pair = "cf_sum->vc_sum";
  granger.cause = "cf_sum";
  granger.effect = "vc_sum";
  granger.lag = 5;
  granger.d_max = 1;
  granger.chi_square = 13.1;
  granger.p_value = 0.023;
  granger.stars = "**";
  granger.conclusion = "Unidirectional causality: cf_sum -> vc_sum";
  granger.robustness.p_lower = 0.11;
  granger.robustness.p_center = 0.023;
  granger.robustness.p_upper = 0.13;
  granger.robustness.volatile_decision = true;
  report.granger.push_back(granger);
  cfvc::CointegrationBlock block;
  block.pair = "cf_sum,vc_sum";
  block.lag = 5;
  block.spec = "constant_and_trend";
  block.concluded_rank = 2;
  block.conclusion = "At least one cointegrating vector.";
  block.rows.push_back({0, 0.481, 36.131, 25.32, "***", 22.284, 18.96, "**"});
  block.rows.push_back({1, 0.335, 13.846, 12.25, "**", 13.846, 12.25, "**"});
  report.cointegration.push_back(block);
  cfvc::IrfSummary irf;
  irf.pair = "cf_sum,vc_sum";
  irf.impulse = "cf_sum";
  irf.response = "vc_sum";
  irf.horizon = 2;
  irf.cumulative = true;
  irf.level = 0.9;
  irf.replications = 500;
  irf.seed = 99;
  irf.discarded = 1;
  irf.point = {0.0, 0.004, 0.01};
  irf.lower = {-0.001, 0.001, 0.002};
  irf.upper = {0.001, 0.008, 0.019};
  report.irfs.push_back(irf);
  report.failures.push_back({"cf_fashion,vc_fashion", "irf", "went sideways"});
  return report;
}

}  // namespace

TEST_CASE("significance stars follow the three-level convention") {
  CHECK(cfvc::significance_stars(0.004) == "***");
  CHECK(cfvc::significance_stars(0.0099) == "***");
  CHECK(cfvc::significance_stars(0.01) == "**");
  CHECK(cfvc::significance_stars(0.023) == "**");
  CHECK(cfvc::significance_stars(0.05) == "*");
  CHECK(cfvc::significance_stars(0.099) == "*");
  CHECK(cfvc::significance_stars(0.1) == "");
  CHECK(cfvc::significance_stars(0.92) == "");
}

TEST_CASE("stars from critical values use the right tail") {
  CHECK(cfvc::stars_from_critical(36.131, 30.45, 25.32, 22.76) == "***");
  CHECK(cfvc::stars_from_critical(27.0, 30.45, 25.32, 22.76) == "**");
  CHECK(cfvc::stars_from_critical(23.0, 30.45, 25.32, 22.76) == "*");
  CHECK(cfvc::stars_from_critical(20.0, 30.45, 25.32, 22.76) == "");
  CHECK(cfvc::stars_from_critical(25.32, 30.45, 25.32, 22.76) == "*");
}

TEST_CASE("empty report serializes validly with empty tables") {
  RunReport report;
  report.provenance = {"0", 0, "0.1.0"};
  const auto doc = report_to_json(report);
  CHECK(cfvc::report_schema_errors(doc).empty());
  CHECK(doc["granger"].is_array());
  CHECK(doc["granger"].empty());

  const auto path = temp_dir() / "empty.json";
  emit_report(report, cfvc::ReportFormat::structured_data, path.string());
  const auto parsed = nlohmann::json::parse(slurp(path));
  CHECK(cfvc::report_schema_errors(parsed).empty());

  const auto text_path = temp_dir() / "empty.txt";
  emit_report(report, cfvc::ReportFormat::plain_table, text_path.string());
  CHECK(slurp(text_path).find("(none)") != std::string::npos);
}

TEST_CASE("populated report passes its own schema check") {
  const auto doc = report_to_json(sample_report());
  const auto problems = cfvc::report_schema_errors(doc);
  for (const auto& problem : problems) MESSAGE(problem);
  CHECK(problems.empty());
}

TEST_CASE("schema check names missing and stray keys") {
  auto doc = report_to_json(sample_report());
  doc["granger"][0].erase("p_value");
  doc["granger"][0]["pee_value"] = 0.5;
  const auto problems = cfvc::report_schema_errors(doc);
  REQUIRE(problems.size() == 2);
  CHECK(problems[0] == "granger[0] lacks key p_value");
  CHECK(problems[1] == "granger[0] has stray key pee_value");

  auto gone = report_to_json(sample_report());
  gone.erase("cointegration");
  const auto missing = cfvc::report_schema_errors(gone);
  REQUIRE(missing.size() == 1);
  CHECK(missing[0] == "missing table: cointegration");

  auto nested = report_to_json(sample_report());
  nested["cointegration"][0]["rows"][1].erase("trace");
  const auto rows = cfvc::report_schema_errors(nested);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == "cointegration[0].rows[1] lacks key trace");
}

TEST_CASE("serialization is deterministic") {
  const auto report = sample_report();
  const auto a = report_to_json(report).dump(2);
  const auto b = report_to_json(report).dump(2);
  CHECK(a == b);

  const auto path_a = temp_dir() / "det_a.json";
  const auto path_b = temp_dir() / "det_b.json";
  emit_report(report, cfvc::ReportFormat::structured_data, path_a.string());
  emit_report(report, cfvc::ReportFormat::structured_data, path_b.string());
  CHECK(slurp(path_a) == slurp(path_b));
  CHECK(slurp(path_a).back() == '\n');
}

TEST_CASE("plain rendering carries the causality and rank tables") {
  const auto text = render_plain(sample_report());
  CHECK(text.find("cf_sum->vc_sum") != std::string::npos);
  CHECK(text.find("13.100") != std::string::npos);
  CHECK(text.find("0.023") != std::string::npos);
  CHECK(text.find("Unidirectional causality: cf_sum -> vc_sum") !=
        std::string::npos);
  CHECK(text.find("volatile") != std::string::npos);
  CHECK(text.find("*** p<0.01, ** p<0.05, * p<0.1") != std::string::npos);
  CHECK(text.find("36.131") != std::string::npos);
  CHECK(text.find("r<=1") != std::string::npos);
  CHECK(text.find("At least one cointegrating vector.") != std::string::npos);
  CHECK(text.find("went sideways") != std::string::npos);

  // every rendered statistic must exist in the structured report
  const auto doc = report_to_json(sample_report());
  CHECK(doc["granger"][0]["chi_square"] == 13.1);
  CHECK(doc["cointegration"][0]["rows"][0]["trace"] == 36.131);
}

TEST_CASE("plot data writes series overlay and cross-response bands") {
  auto report = sample_report();
  cfvc::IrfSummary own = report.irfs.front();
  own.impulse = "vc_sum";
  own.response = "vc_sum";
  report.irfs.push_back(own);
  cfvc::IrfSummary bandless = report.irfs.front();
  bandless.impulse = "vc_sum";
  bandless.response = "cf_sum";
  bandless.lower.clear();
  bandless.upper.clear();
  report.irfs.push_back(bandless);

  const auto dir = temp_dir() / "plots";
  fs::remove_all(dir);
  emit_plot_data(report, dir.string());

  const auto overlay = slurp(dir / "plot_series.csv");
  CHECK(overlay.rfind("month,cf_sum\n", 0) == 0);
  CHECK(overlay.find("2012-06,5") != std::string::npos);

  const auto bands = slurp(dir / "plot_irf_cf_sum_to_vc_sum.csv");
  CHECK(bands.rfind("lag,point,lower,upper\n", 0) == 0);
  CHECK(std::count(bands.begin(), bands.end(), '\n') == 4);  // header + 3 lags

  CHECK_FALSE(fs::exists(dir / "plot_irf_vc_sum_to_vc_sum.csv"));
  CHECK_FALSE(fs::exists(dir / "plot_irf_vc_sum_to_cf_sum.csv"));
}

TEST_CASE("unwritable path raises IoError") {
  const auto dir = temp_dir() / "blocker";
  fs::create_directories(dir);
  CHECK_THROWS_AS(emit_report(sample_report(),
                              cfvc::ReportFormat::structured_data,
                              dir.string()),
                  cfvc::IoError);
}
