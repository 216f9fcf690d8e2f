#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfvc/time_series.hpp"

namespace cfvc {

/// "***" below 0.01, "**" below 0.05, "*" below 0.1, empty otherwise.
std::string significance_stars(double p_value);

/// Same convention driven by critical values instead of a p-value, for
/// statistics whose distribution is only tabulated.  Larger is more
/// significant.
std::string stars_from_critical(double statistic, double cv_1pct,
                                double cv_5pct, double cv_10pct);

struct DescriptiveRow {
  std::string series;
  long count = 0;
  double volume = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

struct CorrelationRow {
  std::string pair;
  std::string series_a;
  std::string series_b;
  double rho = 0.0;
  double p_value = 1.0;
  long n = 0;
  std::string stars;
};

struct UnitRootRow {
  std::string series;
  int diff_order = 0;
  std::string test;  // adf / pp / kpss
  std::string spec;
  double statistic = 0.0;
  double cv_5pct = 0.0;
  int lags = 0;  // adf lag count, pp/kpss bandwidth
  long nobs = 0;
  bool reject_5pct = false;
};

struct IntegrationRow {
  std::string series;
  int order = 0;
  bool capped = false;
  std::string verdicts;  // per-difference verdicts, "d0=ambiguous d1=stationary"
};

struct LagCandidateRow {
  int m = 0;
  double aic = 0.0;
  double bic_sic = 0.0;
  double fpe = 0.0;
  double ljung_box_min_p = 0.0;
  bool stable = false;
};

struct LagSelectionRow {
  std::string pair;
  int chosen_m = 0;
  bool diagnostics_violated = false;
  std::string rationale;
  std::vector<LagCandidateRow> candidates;
};

struct GrangerRobustness {
  std::optional<double> p_lower;  // at m - 1
  double p_center = 1.0;
  std::optional<double> p_upper;  // at m + 1
  bool volatile_decision = false;
};

struct GrangerRow {
  std::string pair;  // "cause->effect"
  std::string cause;
  std::string effect;
  int lag = 0;
  int d_max = 0;
  double chi_square = 0.0;
  double p_value = 1.0;
  std::string stars;
  std::string conclusion;
  GrangerRobustness robustness;
};

struct CointegrationRankRow {
  int rank_null = 0;  // r = 0 or r <= 1
  double eigenvalue = 0.0;
  double trace = 0.0;
  double trace_cv_5pct = 0.0;
  std::string trace_stars;
  double max_eig = 0.0;
  double max_eig_cv_5pct = 0.0;
  std::string max_eig_stars;
};

struct CointegrationBlock {
  std::string pair;  // "a,b"
  int lag = 0;
  std::string spec;
  int concluded_rank = 0;
  std::string conclusion;
  std::vector<CointegrationRankRow> rows;
};

struct IrfSummary {
  std::string pair;
  std::string impulse;
  std::string response;
  int horizon = 0;
  bool cumulative = true;
  double level = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
  int discarded = 0;
  double shock = 0.01;  // impulse size the responses are normalized to
  std::vector<double> point;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct PairFailure {
  std::string pair;
  std::string stage;
  std::string message;
};

struct IngestSummary {
  std::string source;
  long rows_parsed = 0;
  long rows_after_trim = 0;
  double mapping_coverage = 1.0;
};

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
};

/// Everything one pipeline run produces.  Serialization is stable: equal
/// reports serialize byte for byte.
struct RunReport {
  Provenance provenance;
  std::string window_start;
  std::string window_end;
  double keep_quantile = 0.99;
  int max_lag = 6;
  std::string d_max_policy;  // "1", "auto", ...
  std::string deterministic_spec;
  bool trim_before_segmentation = true;
  std::map<std::string, std::string> transforms;  // stage -> levels | log

  std::vector<IngestSummary> ingest;
  std::vector<DescriptiveRow> descriptives;
  std::vector<TimeSeries> series;  // monthly aggregates, raw levels
  std::vector<CorrelationRow> correlations;
  std::vector<UnitRootRow> unit_roots;
  std::vector<IntegrationRow> integration;
  std::vector<LagSelectionRow> lag_selection;
  std::vector<GrangerRow> granger;
  std::vector<CointegrationBlock> cointegration;
  std::vector<IrfSummary> irfs;
  std::vector<PairFailure> failures;
};

nlohmann::ordered_json report_to_json(const RunReport& report);

/// Fixed-width text rendering of the report tables.  Every number shown
/// here also appears (at full precision) in the structured serialization.
std::string render_plain(const RunReport& report);

/// Structural problems of a serialized report: missing tables, missing or
/// unexpected row keys.  Empty means schema-valid.
std::vector<std::string> report_schema_errors(const nlohmann::json& doc);

enum class ReportFormat { structured_data, plain_table };

/// Writes the report to `path` in the requested format.
void emit_report(const RunReport& report, ReportFormat format,
                 const std::string& path);

/// Writes plot inputs under `dir`: one monthly-series overlay CSV plus one
/// `lag,point,lower,upper` CSV per bootstrapped impulse response.
void emit_plot_data(const RunReport& report, const std::string& dir);

}  // namespace cfvc
