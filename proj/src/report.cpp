#include "cfvc/report.hpp"

#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "cfvc/errors.hpp"

namespace cfvc {

namespace {

using nlohmann::ordered_json;

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

std::string file_token(std::string name) {
  for (auto& c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9');
    if (!ok) c = '_';
  }
  return name;
}

ordered_json json_vector(const std::vector<double>& values) {
  return ordered_json(values);
}

ordered_json json_vector(const Vector& values) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) out.push_back(values(i));
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write to " + path + " failed");
}

/// Requires a table of objects whose keys are exactly `keys`.
void check_table(const nlohmann::json& doc, const std::string& table,
                 const std::set<std::string>& keys,
                 std::vector<std::string>& problems) {
  if (!doc.contains(table)) {
    problems.push_back("missing table: " + table);
    return;
  }
  if (!doc[table].is_array()) {
    problems.push_back(table + " is not an array");
    return;
  }
  std::size_t row_index = 0;
  for (const auto& row : doc[table]) {
    const std::string where = table + "[" + std::to_string(row_index) + "]";
    if (!row.is_object()) {
      problems.push_back(where + " is not an object");
      ++row_index;
      continue;
    }
    for (const auto& key : keys) {
      if (!row.contains(key)) problems.push_back(where + " lacks key " + key);
    }
    for (const auto& [key, value] : row.items()) {
      (void)value;
      if (!keys.count(key)) problems.push_back(where + " has stray key " + key);
    }
    ++row_index;
  }
}

}  // namespace

std::string significance_stars(double p_value) {
  if (p_value < 0.01) return "***";
  if (p_value < 0.05) return "**";
  if (p_value < 0.1) return "*";
  return "";
}

std::string stars_from_critical(double statistic, double cv_1pct,
                                double cv_5pct, double cv_10pct) {
  if (statistic > cv_1pct) return "***";
  if (statistic > cv_5pct) return "**";
  if (statistic > cv_10pct) return "*";
  return "";
}

nlohmann::ordered_json report_to_json(const RunReport& report) {
  ordered_json doc;
  doc["provenance"] = {{"config_hash", report.provenance.config_hash},
                       {"seed", report.provenance.seed},
                       {"version", report.provenance.version}};
  doc["window"] = {{"start", report.window_start}, {"end", report.window_end}};
  ordered_json transforms;
  for (const auto& [stage, transform] : report.transforms) {
    transforms[stage] = transform;
  }
  doc["settings"] = {{"keep_quantile", report.keep_quantile},
                     {"max_lag", report.max_lag},
                     {"d_max", report.d_max_policy},
                     {"deterministic_spec", report.deterministic_spec},
                     {"trim_before_segmentation",
                      report.trim_before_segmentation},
                     {"transforms", transforms}};

  doc["ingest"] = ordered_json::array();
  for (const auto& row : report.ingest) {
    doc["ingest"].push_back({{"source", row.source},
                             {"rows_parsed", row.rows_parsed},
                             {"rows_after_trim", row.rows_after_trim},
                             {"mapping_coverage", row.mapping_coverage}});
  }

  doc["descriptives"] = ordered_json::array();
  for (const auto& row : report.descriptives) {
    doc["descriptives"].push_back({{"series", row.series},
                                   {"count", row.count},
                                   {"volume", row.volume},
                                   {"mean", row.mean},
                                   {"sd", row.sd},
                                   {"q25", row.q25},
                                   {"median", row.median},
                                   {"q75", row.q75}});
  }

  doc["series"] = ordered_json::array();
  for (const auto& series : report.series) {
    doc["series"].push_back({{"name", series.label()},
                             {"start", series.start().str()},
                             {"values", json_vector(series.values())}});
  }

  doc["correlations"] = ordered_json::array();
  for (const auto& row : report.correlations) {
    doc["correlations"].push_back({{"pair", row.pair},
                                   {"series_a", row.series_a},
                                   {"series_b", row.series_b},
                                   {"rho", row.rho},
                                   {"p_value", row.p_value},
                                   {"n", row.n},
                                   {"stars", row.stars}});
  }

  doc["unit_roots"] = ordered_json::array();
  for (const auto& row : report.unit_roots) {
    doc["unit_roots"].push_back({{"series", row.series},
                                 {"diff_order", row.diff_order},
                                 {"test", row.test},
                                 {"spec", row.spec},
                                 {"statistic", row.statistic},
                                 {"cv_5pct", row.cv_5pct},
                                 {"lags", row.lags},
                                 {"nobs", row.nobs},
                                 {"reject_5pct", row.reject_5pct}});
  }

  doc["integration"] = ordered_json::array();
  for (const auto& row : report.integration) {
    doc["integration"].push_back({{"series", row.series},
                                  {"order", row.order},
                                  {"capped", row.capped},
                                  {"verdicts", row.verdicts}});
  }

  doc["lag_selection"] = ordered_json::array();
  for (const auto& row : report.lag_selection) {
    ordered_json candidates = ordered_json::array();
    for (const auto& c : row.candidates) {
      candidates.push_back({{"m", c.m},
                            {"aic", c.aic},
                            {"bic_sic", c.bic_sic},
                            {"fpe", c.fpe},
                            {"ljung_box_min_p", c.ljung_box_min_p},
                            {"stable", c.stable}});
    }
    doc["lag_selection"].push_back(
        {{"pair", row.pair},
         {"chosen_m", row.chosen_m},
         {"diagnostics_violated", row.diagnostics_violated},
         {"rationale", row.rationale},
         {"candidates", candidates}});
  }

  doc["granger"] = ordered_json::array();
  for (const auto& row : report.granger) {
    ordered_json robustness = {{"p_center", row.robustness.p_center},
                               {"volatile", row.robustness.volatile_decision}};
    robustness["p_lower"] = row.robustness.p_lower
                                ? ordered_json(*row.robustness.p_lower)
                                : ordered_json(nullptr);
    robustness["p_upper"] = row.robustness.p_upper
                                ? ordered_json(*row.robustness.p_upper)
                                : ordered_json(nullptr);
    doc["granger"].push_back({{"pair", row.pair},
                              {"cause", row.cause},
                              {"effect", row.effect},
                              {"lag", row.lag},
                              {"d_max", row.d_max},
                              {"chi_square", row.chi_square},
                              {"p_value", row.p_value},
                              {"stars", row.stars},
                              {"conclusion", row.conclusion},
                              {"robustness", robustness}});
  }

  doc["cointegration"] = ordered_json::array();
  for (const auto& block : report.cointegration) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : block.rows) {
      rows.push_back({{"rank_null", r.rank_null},
                      {"eigenvalue", r.eigenvalue},
                      {"trace", r.trace},
                      {"trace_cv_5pct", r.trace_cv_5pct},
                      {"trace_stars", r.trace_stars},
                      {"max_eig", r.max_eig},
                      {"max_eig_cv_5pct", r.max_eig_cv_5pct},
                      {"max_eig_stars", r.max_eig_stars}});
    }
    doc["cointegration"].push_back({{"pair", block.pair},
                                    {"lag", block.lag},
                                    {"spec", block.spec},
                                    {"concluded_rank", block.concluded_rank},
                                    {"conclusion", block.conclusion},
                                    {"rows", rows}});
  }

  doc["irfs"] = ordered_json::array();
  for (const auto& irf : report.irfs) {
    doc["irfs"].push_back({{"pair", irf.pair},
                           {"impulse", irf.impulse},
                           {"response", irf.response},
                           {"horizon", irf.horizon},
                           {"cumulative", irf.cumulative},
                           {"level", irf.level},
                           {"replications", irf.replications},
                           {"seed", irf.seed},
                           {"discarded", irf.discarded},
                           {"shock", irf.shock},
                           {"point", json_vector(irf.point)},
                           {"lower", json_vector(irf.lower)},
                           {"upper", json_vector(irf.upper)}});
  }

  doc["failures"] = ordered_json::array();
  for (const auto& failure : report.failures) {
    doc["failures"].push_back({{"pair", failure.pair},
                               {"stage", failure.stage},
                               {"message", failure.message}});
  }
  return doc;
}

std::string render_plain(const RunReport& report) {
  std::string out;
  out += fmt("Run report (version %s)\n", report.provenance.version.c_str());
  out += fmt("config hash: %s   seed: %llu\n",
             report.provenance.config_hash.c_str(),
             (unsigned long long)report.provenance.seed);
  out += fmt("window: %s .. %s   keep quantile: %.3f   max lag: %d   d_max: %s\n",
             report.window_start.c_str(), report.window_end.c_str(),
             report.keep_quantile, report.max_lag,
             report.d_max_policy.c_str());
  out += fmt("deterministic spec: %s   trim before segmentation: %s\n",
             report.deterministic_spec.c_str(),
             report.trim_before_segmentation ? "yes" : "no");
  out += "transforms:";
  for (const auto& [stage, transform] : report.transforms) {
    out += fmt(" %s=%s", stage.c_str(), transform.c_str());
  }
  out += "\n";

  out += "\n-- Ingest --\n";
  out += fmt("%-16s %10s %12s %10s\n", "source", "rows", "after trim",
             "coverage");
  for (const auto& row : report.ingest) {
    out += fmt("%-16s %10ld %12ld %10.3f\n", row.source.c_str(),
               row.rows_parsed, row.rows_after_trim, row.mapping_coverage);
  }

  out += "\n-- Descriptive statistics (transaction level) --\n";
  out += fmt("%-18s %8s %18s %14s %14s %12s %12s %12s\n", "series", "count",
             "volume($)", "mean($)", "sd($)", "25%($)", "50%($)", "75%($)");
  for (const auto& row : report.descriptives) {
    out += fmt("%-18s %8ld %18.2f %14.2f %14.2f %12.2f %12.2f %12.2f\n",
               row.series.c_str(), row.count, row.volume, row.mean, row.sd,
               row.q25, row.median, row.q75);
  }

  if (!report.correlations.empty()) {
    out += "\n-- Correlations --\n";
    out += fmt("%-30s %9s %9s %5s %5s\n", "pair", "rho", "p-value", "n",
               "sig");
    for (const auto& row : report.correlations) {
      out += fmt("%-30s %9.3f %9.3f %5ld %5s\n", row.pair.c_str(), row.rho,
                 row.p_value, row.n, row.stars.c_str());
    }
  }

  if (!report.unit_roots.empty()) {
    out += "\n-- Unit roots --\n";
    out += fmt("%-18s %2s %-5s %-20s %10s %9s %5s %5s %7s\n", "series", "d",
               "test", "spec", "statistic", "5% cv", "lags", "nobs", "reject");
    for (const auto& row : report.unit_roots) {
      out += fmt("%-18s %2d %-5s %-20s %10.3f %9.3f %5d %5ld %7s\n",
                 row.series.c_str(), row.diff_order, row.test.c_str(),
                 row.spec.c_str(), row.statistic, row.cv_5pct, row.lags,
                 row.nobs, row.reject_5pct ? "yes" : "no");
    }
  }

  if (!report.integration.empty()) {
    out += "\n-- Integration orders --\n";
    out += fmt("%-18s %5s %6s  %s\n", "series", "order", "capped", "evidence");
    for (const auto& row : report.integration) {
      out += fmt("%-18s %5d %6s  %s\n", row.series.c_str(), row.order,
                 row.capped ? "yes" : "no", row.verdicts.c_str());
    }
  }

  if (!report.lag_selection.empty()) {
    out += "\n-- Lag selection --\n";
    for (const auto& row : report.lag_selection) {
      out += fmt("%s: chosen m = %d%s\n  %s\n", row.pair.c_str(), row.chosen_m,
                 row.diagnostics_violated ? " (diagnostics violated)" : "",
                 row.rationale.c_str());
      out += fmt("  %2s %12s %12s %14s %10s %7s\n", "m", "aic", "bic/sic",
                 "fpe", "lb min p", "stable");
      for (const auto& c : row.candidates) {
        out += fmt("  %2d %12.5f %12.5f %14.6g %10.4f %7s\n", c.m, c.aic,
                   c.bic_sic, c.fpe, c.ljung_box_min_p,
                   c.stable ? "yes" : "no");
      }
    }
  }

  if (!report.granger.empty()) {
    out += "\n-- Granger causality (Toda-Yamamoto MWald) --\n";
    out += fmt("%-34s %4s %10s %9s %5s  %s\n", "pair", "lag", "chi^2",
               "p-value", "sig", "conclusion");
    for (const auto& row : report.granger) {
      out += fmt("%-34s %4d %10.3f %9.3f %5s  %s\n", row.pair.c_str(),
                 row.lag, row.chi_square, row.p_value, row.stars.c_str(),
                 row.conclusion.c_str());
      std::string lower = row.robustness.p_lower
                              ? fmt("%.3f", *row.robustness.p_lower)
                              : std::string("-");
      std::string upper = row.robustness.p_upper
                              ? fmt("%.3f", *row.robustness.p_upper)
                              : std::string("-");
      out += fmt("%-34s      p(m-1)=%s p(m)=%.3f p(m+1)=%s %s\n", "",
                 lower.c_str(), row.robustness.p_center, upper.c_str(),
                 row.robustness.volatile_decision ? "volatile" : "smooth");
    }
    out += "*** p<0.01, ** p<0.05, * p<0.1\n";
  }

  if (!report.cointegration.empty()) {
    out += "\n-- Johansen cointegration --\n";
    out += fmt("%-30s %4s %-6s %11s %12s %9s %12s %9s  %s\n", "pair", "lag",
               "rank", "eigenvalue", "trace", "5% cv", "max eig", "5% cv",
               "conclusion");
    for (const auto& block : report.cointegration) {
      bool first = true;
      for (const auto& r : block.rows) {
        const std::string rank_label =
            r.rank_null == 0 ? "r=0" : fmt("r<=%d", r.rank_null);
        out += fmt("%-30s %4s %-6s %11.4f %9.3f%-3s %9.2f %9.3f%-3s %9.2f  %s\n",
                   first ? block.pair.c_str() : "",
                   first ? fmt("%d", block.lag).c_str() : "",
                   rank_label.c_str(), r.eigenvalue, r.trace,
                   r.trace_stars.c_str(), r.trace_cv_5pct, r.max_eig,
                   r.max_eig_stars.c_str(), r.max_eig_cv_5pct,
                   first ? block.conclusion.c_str() : "");
        first = false;
      }
    }
    out += "*** p<0.01, ** p<0.05, * p<0.1\n";
  }

  if (!report.irfs.empty()) {
    out += "\n-- Impulse responses --\n";
    for (const auto& irf : report.irfs) {
      const double last = irf.point.empty() ? 0.0 : irf.point.back();
      out += fmt("%s: %s -> %s, %s, horizon %d, shock %.2f, %d%% band, "
                 "%d replications (%d discarded), response at final lag "
                 "%.6f\n",
                 irf.pair.c_str(), irf.impulse.c_str(), irf.response.c_str(),
                 irf.cumulative ? "cumulative" : "per-lag", irf.horizon,
                 irf.shock, (int)(irf.level * 100.0 + 0.5), irf.replications,
                 irf.discarded, last);
    }
  }

  out += "\n-- Failures --\n";
  if (report.failures.empty()) {
    out += "(none)\n";
  } else {
    for (const auto& failure : report.failures) {
      out += fmt("%s [%s]: %s\n", failure.pair.c_str(), failure.stage.c_str(),
                 failure.message.c_str());
    }
  }
  return out;
}

std::vector<std::string> report_schema_errors(const nlohmann::json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) {
    problems.push_back("report is not an object");
    return problems;
  }
  for (const char* key : {"provenance", "window", "settings"}) {
    if (!doc.contains(key) || !doc[key].is_object()) {
      problems.push_back(std::string("missing object: ") + key);
    }
  }
  check_table(doc, "ingest",
              {"source", "rows_parsed", "rows_after_trim", "mapping_coverage"},
              problems);
  check_table(doc, "descriptives",
              {"series", "count", "volume", "mean", "sd", "q25", "median",
               "q75"},
              problems);
  check_table(doc, "series", {"name", "start", "values"}, problems);
  check_table(doc, "correlations",
              {"pair", "series_a", "series_b", "rho", "p_value", "n", "stars"},
              problems);
  check_table(doc, "unit_roots",
              {"series", "diff_order", "test", "spec", "statistic", "cv_5pct",
               "lags", "nobs", "reject_5pct"},
              problems);
  check_table(doc, "integration", {"series", "order", "capped", "verdicts"},
              problems);
  check_table(doc, "lag_selection",
              {"pair", "chosen_m", "diagnostics_violated", "rationale",
               "candidates"},
              problems);
  check_table(doc, "granger",
              {"pair", "cause", "effect", "lag", "d_max", "chi_square",
               "p_value", "stars", "conclusion", "robustness"},
              problems);
  check_table(doc, "cointegration",
              {"pair", "lag", "spec", "concluded_rank", "conclusion", "rows"},
              problems);
  if (doc.contains("cointegration") && doc["cointegration"].is_array()) {
    std::size_t index = 0;
    for (const auto& block : doc["cointegration"]) {
      if (block.is_object() && block.contains("rows")) {
        nlohmann::json wrapper;
        wrapper["rows"] = block["rows"];
        auto before = problems.size();
        check_table(wrapper, "rows",
                    {"rank_null", "eigenvalue", "trace", "trace_cv_5pct",
                     "trace_stars", "max_eig", "max_eig_cv_5pct",
                     "max_eig_stars"},
                    problems);
        for (auto i = before; i < problems.size(); ++i) {
          problems[i] = "cointegration[" + std::to_string(index) + "]." +
                        problems[i];
        }
      }
      ++index;
    }
  }
  check_table(doc, "irfs",
              {"pair", "impulse", "response", "horizon", "cumulative", "level",
               "replications", "seed", "discarded", "shock", "point", "lower",
               "upper"},
              problems);
  check_table(doc, "failures", {"pair", "stage", "message"}, problems);
  return problems;
}

void emit_report(const RunReport& report, ReportFormat format,
                 const std::string& path) {
  if (format == ReportFormat::structured_data) {
    write_text_file(path, report_to_json(report).dump(2) + "\n");
  } else {
    write_text_file(path, render_plain(report));
  }
}

void emit_plot_data(const RunReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);

  if (!report.series.empty()) {
    const auto& first = report.series.front();
    std::string csv = "month";
    for (const auto& series : report.series) csv += "," + series.label();
    csv += "\n";
    for (Eigen::Index i = 0; i < first.size(); ++i) {
      csv += first.month_at(i).str();
      for (const auto& series : report.series) {
        csv += fmt(",%.17g", i < series.size() ? series.values()(i) : 0.0);
      }
      csv += "\n";
    }
    write_text_file((std::filesystem::path(dir) / "plot_series.csv").string(),
                    csv);
  }

  for (const auto& irf : report.irfs) {
    if (irf.impulse == irf.response) continue;
    if (irf.point.empty() || irf.lower.empty()) continue;
    std::string csv = "lag,point,lower,upper\n";
    for (std::size_t h = 0; h < irf.point.size(); ++h) {
      csv += fmt("%zu,%.17g,%.17g,%.17g\n", h, irf.point[h], irf.lower[h],
                 irf.upper[h]);
    }
    const std::string name = "plot_irf_" + file_token(irf.impulse) + "_to_" +
                             file_token(irf.response) + ".csv";
    write_text_file((std::filesystem::path(dir) / name).string(), csv);
  }
}

}  // namespace cfvc
