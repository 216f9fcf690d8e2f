#include "cfvc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cfvc/causality.hpp"
#include "cfvc/errors.hpp"
#include "cfvc/irf.hpp"
#include "cfvc/rng.hpp"
#include "cfvc/var_model.hpp"

namespace cfvc {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string> kStages = {"correlation", "unit_root", "causality",
                                       "cointegration", "irf"};

std::string to_string(UnitRootTest test) {
  switch (test) {
    case UnitRootTest::adf: return "adf";
    case UnitRootTest::pp: return "pp";
    default: return "kpss";
  }
}

Source parse_source_token(const std::string& token) {
  if (token == "crowdfunding" || token == "cf") return Source::crowdfunding;
  if (token == "venture_capital" || token == "vc") {
    return Source::venture_capital;
  }
  throw ConfigInvalid("unknown source: " + token);
}

MergedCategory parse_category_token(const std::string& token) {
  if (token == "hardware") return MergedCategory::hardware;
  if (token == "media") return MergedCategory::media;
  if (token == "fashion") return MergedCategory::fashion;
  if (token == "unmapped") return MergedCategory::unmapped;
  throw ConfigInvalid("unknown category: " + token);
}

DeterministicSpec parse_spec_token(const std::string& token) {
  if (token == "constant") return DeterministicSpec::constant;
  if (token == "constant_and_trend") {
    return DeterministicSpec::constant_and_trend;
  }
  throw ConfigInvalid("unknown deterministic_spec: " + token);
}

void reject_stray_keys(const json& object, const std::string& where,
                       const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ConfigInvalid("unknown key in " + where + ": " + key);
    }
  }
}

std::string require_string(const json& object, const std::string& where,
                           const std::string& key) {
  if (!object.contains(key) || !object[key].is_string()) {
    throw ConfigInvalid(where + "." + key + " must be a string");
  }
  return object[key].get<std::string>();
}

YearMonth parse_month(const std::string& text, const std::string& where) {
  try {
    return YearMonth::parse(text);
  } catch (const std::exception& e) {
    throw ConfigInvalid(where + ": " + e.what());
  }
}

SegmentRule parse_segment(const json& entry, const std::string& where) {
  std::string token = "all";
  if (entry.contains("segment")) {
    if (!entry["segment"].is_string()) {
      throw ConfigInvalid(where + ".segment must be a string");
    }
    token = entry["segment"].get<std::string>();
  }
  const bool has_threshold =
      entry.contains("threshold") && !entry["threshold"].is_null();
  if (token == "all" || token == "angel_seed" || token == "early_growth") {
    if (has_threshold) {
      throw ConfigInvalid(where + ".threshold only applies to "
                          "small_below_threshold");
    }
    if (token == "all") return SegmentRule::all();
    if (token == "angel_seed") return SegmentRule::angel_seed();
    return SegmentRule::early_growth();
  }
  if (token == "small_below_threshold") {
    if (!has_threshold || !entry["threshold"].is_number()) {
      throw ConfigInvalid(where + ".threshold (a number) is required for "
                          "small_below_threshold");
    }
    return SegmentRule::small_below_threshold(entry["threshold"].get<double>());
  }
  throw ConfigInvalid(where + ".segment unknown: " + token);
}

/// Stable 64-bit content hash (FNV-1a).
std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

/// Re-labels a transformed series with its configured name so every report
/// row keys on config names.
TimeSeries stage_series(const TimeSeries& series, const std::string& transform) {
  if (transform == "log") {
    TimeSeries logged = log_transform(series);
    return TimeSeries(series.label(), logged.start(), logged.values());
  }
  return series;
}

DescriptiveRow describe(const std::string& name, std::vector<double> amounts) {
  DescriptiveRow row;
  row.series = name;
  row.count = (long)amounts.size();
  if (amounts.empty()) return row;
  double sum = 0.0;
  for (double a : amounts) sum += a;
  row.volume = sum;
  row.mean = sum / (double)amounts.size();
  if (amounts.size() > 1) {
    double ss = 0.0;
    for (double a : amounts) ss += (a - row.mean) * (a - row.mean);
    row.sd = std::sqrt(ss / (double)(amounts.size() - 1));
  }
  row.q25 = quantile_type7(amounts, 0.25);
  row.median = quantile_type7(amounts, 0.50);
  row.q75 = quantile_type7(amounts, 0.75);
  return row;
}

UnitRootRow unit_root_row(const std::string& name, int d,
                          const UnitRootResult& result) {
  UnitRootRow row;
  row.series = name;
  row.diff_order = d;
  row.test = to_string(result.test);
  row.spec = to_string(result.spec);
  row.statistic = result.statistic;
  row.cv_5pct = result.critical_values.pct5;
  row.lags = result.lags;
  row.nobs = (long)result.nobs;
  row.reject_5pct = result.reject_at_5pct;
  return row;
}

std::string rank_conclusion(int rank) {
  if (rank == 0) return "No cointegrating vector.";
  if (rank == 1) return "One cointegrating vector.";
  return "At least one cointegrating vector.";
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

GrangerRow granger_row(const std::string& cause, const std::string& effect,
                       const TyRobustness& rob,
                       const std::string& conclusion) {
  GrangerRow row;
  row.pair = cause + "->" + effect;
  row.cause = cause;
  row.effect = effect;
  row.lag = rob.center.m;
  row.d_max = rob.center.d_max;
  row.chi_square = rob.center.wald_statistic;
  row.p_value = rob.center.p_value;
  row.stars = significance_stars(rob.center.p_value);
  row.conclusion = conclusion;
  row.robustness.p_center = rob.center.p_value;
  if (rob.lower) row.robustness.p_lower = rob.lower->p_value;
  if (rob.upper) row.robustness.p_upper = rob.upper->p_value;
  row.robustness.volatile_decision = rob.volatile_;
  return row;
}

}  // namespace

std::string to_string(DeterministicSpec spec) {
  switch (spec) {
    case DeterministicSpec::none: return "none";
    case DeterministicSpec::constant: return "constant";
    default: return "constant_and_trend";
  }
}

std::vector<SeriesConfig> default_series() {
  const auto cf = Source::crowdfunding;
  const auto vc = Source::venture_capital;
  std::vector<SeriesConfig> series;
  series.push_back({"cf_sum", cf, std::nullopt, SegmentRule::all()});
  series.push_back({"vc_sum", vc, std::nullopt, SegmentRule::all()});
  series.push_back({"vc_angel_seed", vc, std::nullopt,
                    SegmentRule::angel_seed()});
  series.push_back({"vc_early_growth", vc, std::nullopt,
                    SegmentRule::early_growth()});
  for (auto category : {MergedCategory::hardware, MergedCategory::media,
                        MergedCategory::fashion}) {
    const std::string suffix = to_string(category);
    series.push_back({"cf_" + suffix, cf, category, SegmentRule::all()});
    series.push_back({"vc_" + suffix, vc, category, SegmentRule::all()});
  }
  return series;
}

std::vector<PairConfig> default_pairs() {
  return {{"cf_sum", "vc_sum"},          {"cf_sum", "vc_angel_seed"},
          {"cf_sum", "vc_early_growth"}, {"cf_hardware", "vc_hardware"},
          {"cf_media", "vc_media"},      {"cf_fashion", "vc_fashion"}};
}

std::map<std::string, std::string> effective_transforms(
    const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> transforms = {{"correlation", "levels"},
                                                   {"unit_root", "log"},
                                                   {"causality", "log"},
                                                   {"cointegration", "log"},
                                                   {"irf", "log"}};
  for (const auto& [stage, transform] : overrides) {
    transforms[stage] = transform;
  }
  return transforms;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot read config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid("config is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigInvalid("config root must be an object");
  reject_stray_keys(doc, "config",
                    {"inputs", "window", "keep_quantile",
                     "trim_before_segmentation", "max_lag", "d_max",
                     "deterministic_spec", "transforms", "irf", "seed",
                     "output_dir", "series", "pairs"});

  PipelineConfig config;
  if (!doc.contains("inputs") || !doc["inputs"].is_object()) {
    throw ConfigInvalid("config.inputs is required");
  }
  reject_stray_keys(doc["inputs"], "inputs",
                    {"crowdfunding", "venture_capital", "mapping"});
  config.crowdfunding_csv = require_string(doc["inputs"], "inputs",
                                           "crowdfunding");
  config.venture_capital_csv = require_string(doc["inputs"], "inputs",
                                              "venture_capital");
  config.mapping_csv = require_string(doc["inputs"], "inputs", "mapping");

  if (doc.contains("window")) {
    if (!doc["window"].is_object()) {
      throw ConfigInvalid("config.window must be an object");
    }
    reject_stray_keys(doc["window"], "window", {"start", "end"});
    config.window_start = parse_month(
        require_string(doc["window"], "window", "start"), "window.start");
    config.window_end = parse_month(
        require_string(doc["window"], "window", "end"), "window.end");
  }
  if (doc.contains("keep_quantile")) {
    if (!doc["keep_quantile"].is_number()) {
      throw ConfigInvalid("keep_quantile must be a number");
    }
    config.keep_quantile = doc["keep_quantile"].get<double>();
  }
  if (doc.contains("trim_before_segmentation")) {
    if (!doc["trim_before_segmentation"].is_boolean()) {
      throw ConfigInvalid("trim_before_segmentation must be a boolean");
    }
    config.trim_before_segmentation =
        doc["trim_before_segmentation"].get<bool>();
  }
  if (doc.contains("max_lag")) {
    if (!doc["max_lag"].is_number_integer()) {
      throw ConfigInvalid("max_lag must be an integer");
    }
    config.max_lag = doc["max_lag"].get<int>();
  }
  if (doc.contains("d_max")) {
    const auto& d = doc["d_max"];
    if (d.is_string()) {
      config.d_max_policy = d.get<std::string>();
    } else if (d.is_number_integer()) {
      config.d_max_policy = std::to_string(d.get<int>());
    } else {
      throw ConfigInvalid("d_max must be an integer or \"auto\"");
    }
  }
  if (doc.contains("deterministic_spec")) {
    config.deterministic_spec = parse_spec_token(
        require_string(doc, "config", "deterministic_spec"));
  }
  if (doc.contains("transforms")) {
    if (!doc["transforms"].is_object()) {
      throw ConfigInvalid("transforms must be an object");
    }
    for (const auto& [stage, transform] : doc["transforms"].items()) {
      if (!kStages.count(stage)) {
        throw ConfigInvalid("unknown transform stage: " + stage);
      }
      if (!transform.is_string() ||
          (transform != "levels" && transform != "log")) {
        throw ConfigInvalid("transform for " + stage +
                            " must be \"levels\" or \"log\"");
      }
      config.transforms[stage] = transform.get<std::string>();
    }
  }
  if (doc.contains("irf")) {
    if (!doc["irf"].is_object()) throw ConfigInvalid("irf must be an object");
    reject_stray_keys(doc["irf"], "irf",
                      {"horizon", "replications", "level", "cumulative"});
    const auto& irf = doc["irf"];
    if (irf.contains("horizon")) config.irf.horizon = irf["horizon"].get<int>();
    if (irf.contains("replications")) {
      config.irf.replications = irf["replications"].get<int>();
    }
    if (irf.contains("level")) config.irf.level = irf["level"].get<double>();
    if (irf.contains("cumulative")) {
      config.irf.cumulative = irf["cumulative"].get<bool>();
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) {
      throw ConfigInvalid("seed must be an integer");
    }
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    config.output_dir = require_string(doc, "config", "output_dir");
  }

  if (doc.contains("series")) {
    if (!doc["series"].is_array()) {
      throw ConfigInvalid("series must be an array");
    }
    for (const auto& entry : doc["series"]) {
      if (!entry.is_object()) {
        throw ConfigInvalid("series entries must be objects");
      }
      const std::string where =
          "series[" + std::to_string(config.series.size()) + "]";
      reject_stray_keys(entry, where,
                        {"name", "source", "category", "segment", "threshold"});
      SeriesConfig sc;
      sc.name = require_string(entry, where, "name");
      sc.source = parse_source_token(require_string(entry, where, "source"));
      if (entry.contains("category") && !entry["category"].is_null()) {
        if (!entry["category"].is_string()) {
          throw ConfigInvalid(where + ".category must be a string");
        }
        sc.category = parse_category_token(entry["category"].get<std::string>());
      }
      sc.segment = parse_segment(entry, where);
      config.series.push_back(std::move(sc));
    }
  } else {
    config.series = default_series();
  }

  if (doc.contains("pairs")) {
    if (!doc["pairs"].is_array()) throw ConfigInvalid("pairs must be an array");
    for (const auto& entry : doc["pairs"]) {
      if (!entry.is_object()) {
        throw ConfigInvalid("pairs entries must be objects");
      }
      const std::string where =
          "pairs[" + std::to_string(config.pairs.size()) + "]";
      reject_stray_keys(entry, where, {"cause", "effect"});
      config.pairs.push_back({require_string(entry, where, "cause"),
                              require_string(entry, where, "effect")});
    }
  } else if (!doc.contains("series")) {
    config.pairs = default_pairs();
  }
  return config;
}

std::vector<std::string> validate_config(const PipelineConfig& config) {
  std::vector<std::string> problems;
  for (const auto& [label, path] :
       {std::pair<std::string, std::string>{"crowdfunding",
                                            config.crowdfunding_csv},
        {"venture_capital", config.venture_capital_csv},
        {"mapping", config.mapping_csv}}) {
    if (path.empty()) {
      problems.push_back(label + " input path is empty");
    } else if (!std::filesystem::exists(path)) {
      problems.push_back("missing input file: " + path);
    }
  }
  if (config.window_end < config.window_start) {
    problems.push_back("window end precedes window start");
  }
  if (!(config.keep_quantile > 0.0) || config.keep_quantile > 1.0) {
    problems.push_back("keep_quantile must lie in (0, 1]");
  }
  if (config.max_lag < 2) problems.push_back("max_lag must be at least 2");
  if (config.d_max_policy != "auto") {
    bool numeric = !config.d_max_policy.empty();
    for (char c : config.d_max_policy) numeric = numeric && c >= '0' && c <= '9';
    if (!numeric || config.d_max_policy.size() > 1) {
      problems.push_back("d_max must be \"auto\" or a digit 0-9");
    }
  }
  for (const auto& [stage, transform] : config.transforms) {
    if (!kStages.count(stage)) problems.push_back("unknown stage: " + stage);
    if (transform != "levels" && transform != "log") {
      problems.push_back("bad transform for " + stage + ": " + transform);
    }
  }
  if (config.irf.horizon < 1) problems.push_back("irf.horizon must be >= 1");
  if (config.irf.replications < 100) {
    problems.push_back("irf.replications must be >= 100");
  }
  if (!(config.irf.level > 0.0 && config.irf.level < 1.0)) {
    problems.push_back("irf.level must lie in (0, 1)");
  }
  if (config.output_dir.empty()) problems.push_back("output_dir is empty");

  std::set<std::string> names;
  for (const auto& sc : config.series) {
    if (sc.name.empty()) problems.push_back("series with empty name");
    if (!names.insert(sc.name).second) {
      problems.push_back("duplicate series name: " + sc.name);
    }
    if (sc.segment.kind == SegmentKind::small_below_threshold &&
        (!sc.segment.threshold || *sc.segment.threshold <= 0.0)) {
      problems.push_back("series " + sc.name +
                         " needs a positive small_below_threshold");
    }
  }
  for (const auto& pair : config.pairs) {
    if (!names.count(pair.cause)) {
      problems.push_back("pair references unknown series: " + pair.cause);
    }
    if (!names.count(pair.effect)) {
      problems.push_back("pair references unknown series: " + pair.effect);
    }
    if (pair.cause == pair.effect) {
      problems.push_back("pair pairs " + pair.cause + " with itself");
    }
  }
  return problems;
}

std::string config_hash(const PipelineConfig& config) {
  ordered_json canon;
  canon["inputs"] = {config.crowdfunding_csv, config.venture_capital_csv,
                     config.mapping_csv};
  canon["window"] = {config.window_start.str(), config.window_end.str()};
  canon["keep_quantile"] = config.keep_quantile;
  canon["trim_before_segmentation"] = config.trim_before_segmentation;
  canon["max_lag"] = config.max_lag;
  canon["d_max"] = config.d_max_policy;
  canon["deterministic_spec"] = to_string(config.deterministic_spec);
  ordered_json transforms;
  for (const auto& [stage, transform] : effective_transforms(config.transforms)) {
    transforms[stage] = transform;
  }
  canon["transforms"] = transforms;
  canon["irf"] = {config.irf.horizon, config.irf.replications,
                  config.irf.level, config.irf.cumulative};
  canon["seed"] = config.seed;
  canon["series"] = ordered_json::array();
  for (const auto& sc : config.series) {
    canon["series"].push_back(
        {sc.name, to_string(sc.source),
         sc.category ? to_string(*sc.category) : "",
         (int)sc.segment.kind,
         sc.segment.threshold ? *sc.segment.threshold : 0.0});
  }
  canon["pairs"] = ordered_json::array();
  for (const auto& pair : config.pairs) {
    canon["pairs"].push_back({pair.cause, pair.effect});
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                (unsigned long long)fnv1a64(canon.dump()));
  return hex;
}

RunReport run_pipeline(const PipelineConfig& config) {
  {
    auto problems = validate_config(config);
    if (!problems.empty()) {
      std::string joined = problems.front();
      for (std::size_t i = 1; i < problems.size(); ++i) {
        joined += "; " + problems[i];
      }
      throw ConfigInvalid(joined);
    }
  }

  RunReport report;
  report.provenance = {config_hash(config), config.seed, kVersion};
  report.window_start = config.window_start.str();
  report.window_end = config.window_end.str();
  report.keep_quantile = config.keep_quantile;
  report.max_lag = config.max_lag;
  report.d_max_policy = config.d_max_policy;
  report.deterministic_spec = to_string(config.deterministic_spec);
  report.trim_before_segmentation = config.trim_before_segmentation;
  const auto transforms = effective_transforms(config.transforms);
  report.transforms = transforms;
  const DeterministicSpec spec = config.deterministic_spec;

  const auto mapping = CategoryMapping::from_csv(config.mapping_csv);
  auto all = parse_transactions(config.crowdfunding_csv, Source::crowdfunding);
  const long cf_parsed = (long)all.size();
  {
    auto vc_rows =
        parse_transactions(config.venture_capital_csv, Source::venture_capital);
    all.insert(all.end(), vc_rows.begin(), vc_rows.end());
  }
  const long vc_parsed = (long)all.size() - cf_parsed;
  if (config.trim_before_segmentation && !all.empty()) {
    all = trim_top_percentile(all, config.keep_quantile);
  }
  all = apply_mapping(all, mapping).transactions;
  for (const auto& [source, parsed] :
       {std::pair<Source, long>{Source::crowdfunding, cf_parsed},
        {Source::venture_capital, vc_parsed}}) {
    long kept = 0;
    long covered = 0;
    for (const auto& txn : all) {
      if (txn.source != source) continue;
      ++kept;
      if (txn.merged != MergedCategory::unmapped) ++covered;
    }
    report.ingest.push_back({to_string(source), parsed, kept,
                             kept ? (double)covered / (double)kept : 1.0});
  }

  std::map<std::string, TimeSeries> built;
  for (const auto& sc : config.series) {
    try {
      std::vector<Transaction> subset;
      for (const auto& txn : all) {
        if (txn.source != sc.source) continue;
        if (sc.category && txn.merged != *sc.category) continue;
        subset.push_back(txn);
      }
      auto segmented = segment(subset, sc.segment);
      if (!config.trim_before_segmentation && !segmented.empty()) {
        segmented = trim_top_percentile(segmented, config.keep_quantile);
      }
      auto monthly = aggregate_monthly(segmented, config.window_start,
                                       config.window_end, sc.name);
      std::vector<double> amounts;
      for (const auto& txn : segmented) {
        const YearMonth ym = txn.date.year_month();
        if (config.window_start <= ym && ym <= config.window_end) {
          amounts.push_back(txn.amount);
        }
      }
      report.descriptives.push_back(describe(sc.name, std::move(amounts)));
      report.series.push_back(monthly.series);
      built.emplace(sc.name, monthly.series);
    } catch (const std::exception& e) {
      report.failures.push_back({sc.name, "series", e.what()});
    }
  }

  std::set<std::string> tested;
  for (const auto& pair : config.pairs) {
    tested.insert(pair.cause);
    tested.insert(pair.effect);
  }
  std::map<std::string, int> orders;
  for (const auto& name : tested) {
    auto it = built.find(name);
    if (it == built.end()) continue;
    try {
      const TimeSeries series = stage_series(it->second,
                                             transforms.at("unit_root"));
      const auto decision = integration_order(series);
      orders[name] = decision.order;
      std::string verdicts;
      for (const auto& level : decision.levels) {
        if (!verdicts.empty()) verdicts += ", ";
        verdicts += "d" + std::to_string(level.d) + "=" + level.verdict;
      }
      report.integration.push_back(
          {name, decision.order, decision.capped, verdicts});
      for (const auto& level : decision.levels) {
        report.unit_roots.push_back(unit_root_row(name, level.d, level.adf));
        report.unit_roots.push_back(unit_root_row(name, level.d, level.pp));
        report.unit_roots.push_back(unit_root_row(name, level.d, level.kpss));
        const auto other = level.adf.spec == DeterministicSpec::constant
                               ? DeterministicSpec::constant_and_trend
                               : DeterministicSpec::constant;
        const TimeSeries at_d =
            level.d > 0 ? difference(series, level.d) : series;
        report.unit_roots.push_back(unit_root_row(name, level.d,
                                                  adf(at_d, other)));
        report.unit_roots.push_back(unit_root_row(name, level.d,
                                                  pp(at_d, other)));
        report.unit_roots.push_back(unit_root_row(name, level.d,
                                                  kpss(at_d, other)));
      }
    } catch (const std::exception& e) {
      report.failures.push_back({name, "unit_root", e.what()});
    }
  }

  int pair_index = 0;
  for (const auto& pair : config.pairs) {
    const std::string pair_label = pair.cause + "," + pair.effect;
    const int streams = pair_index * 2;
    ++pair_index;
    auto cause_it = built.find(pair.cause);
    auto effect_it = built.find(pair.effect);
    if (cause_it == built.end() || effect_it == built.end()) {
      const std::string which =
          cause_it == built.end() ? pair.cause : pair.effect;
      report.failures.push_back({pair_label, "series",
                                 "series " + which + " unavailable"});
      continue;
    }
    const TimeSeries& cause_raw = cause_it->second;
    const TimeSeries& effect_raw = effect_it->second;

    try {
      const auto corr = pearson(stage_series(cause_raw,
                                             transforms.at("correlation")),
                                stage_series(effect_raw,
                                             transforms.at("correlation")));
      report.correlations.push_back({pair_label, pair.cause, pair.effect,
                                     corr.rho, corr.p_value, (long)corr.n,
                                     significance_stars(corr.p_value)});
    } catch (const std::exception& e) {
      report.failures.push_back({pair_label, "correlation", e.what()});
    }

    std::optional<LagSelection> selection;
    TimeSeries cause_ts = cause_raw;
    TimeSeries effect_ts = effect_raw;
    try {
      cause_ts = stage_series(cause_raw, transforms.at("causality"));
      effect_ts = stage_series(effect_raw, transforms.at("causality"));
      selection = select_lag({cause_ts, effect_ts}, config.max_lag, spec);
      LagSelectionRow row;
      row.pair = pair_label;
      row.chosen_m = selection->chosen_m;
      row.diagnostics_violated = selection->diagnostics_violated;
      row.rationale = selection->rationale;
      for (const auto& candidate : selection->candidates) {
        row.candidates.push_back({candidate.m, candidate.criteria.aic,
                                  candidate.criteria.bic_sic,
                                  candidate.criteria.fpe,
                                  candidate.ljung_box_min_p, candidate.stable});
      }
      report.lag_selection.push_back(std::move(row));
    } catch (const std::exception& e) {
      report.failures.push_back({pair_label, "causality", e.what()});
    }

    if (selection) {
      const int m = selection->chosen_m;
      try {
        int d_max = 1;
        if (config.d_max_policy == "auto") {
          auto a = orders.find(pair.cause);
          auto b = orders.find(pair.effect);
          if (a == orders.end() || b == orders.end()) {
            throw InvalidSpec("d_max \"auto\" needs integration orders for "
                              "both series");
          }
          d_max = std::max(a->second, b->second);
        } else {
          d_max = config.d_max_policy[0] - '0';
        }
        const auto forward = ty_robustness(effect_ts, cause_ts, m, d_max, spec);
        const auto reverse = ty_robustness(cause_ts, effect_ts, m, d_max, spec);
        const bool fwd5 = forward.center.reject_at_5pct;
        const bool rev5 = reverse.center.reject_at_5pct;
        std::string conclusion = "No causality";
        if (fwd5 && rev5) {
          conclusion = "Feedback causality";
        } else if (fwd5) {
          conclusion = "Unidirectional causality: " + pair.cause + " -> " +
                       pair.effect;
        } else if (rev5) {
          conclusion = "Unidirectional causality: " + pair.effect + " -> " +
                       pair.cause;
        }
        report.granger.push_back(granger_row(pair.cause, pair.effect, forward,
                                             conclusion));
        report.granger.push_back(granger_row(pair.effect, pair.cause, reverse,
                                             conclusion));
      } catch (const std::exception& e) {
        report.failures.push_back({pair_label, "causality", e.what()});
      }

      try {
        const auto result = johansen(
            stage_series(cause_raw, transforms.at("cointegration")),
            stage_series(effect_raw, transforms.at("cointegration")),
            std::max(m, 2), spec);
        CointegrationBlock block;
        block.pair = pair_label;
        block.lag = result.lag;
        block.spec = to_string(result.spec);
        block.concluded_rank = result.concluded_rank;
        block.conclusion = rank_conclusion(result.concluded_rank);
        for (int r = 0; r < 2; ++r) {
          const auto& trace_cv = result.trace_critical_values[r];
          const auto& max_cv = result.max_eig_critical_values[r];
          block.rows.push_back(
              {r, result.eigenvalues(r), result.trace_statistics(r),
               trace_cv.pct5,
               stars_from_critical(result.trace_statistics(r), trace_cv.pct1,
                                   trace_cv.pct5, trace_cv.pct10),
               result.max_eig_statistics(r), max_cv.pct5,
               stars_from_critical(result.max_eig_statistics(r), max_cv.pct1,
                                   max_cv.pct5, max_cv.pct10)});
        }
        report.cointegration.push_back(std::move(block));
      } catch (const std::exception& e) {
        report.failures.push_back({pair_label, "cointegration", e.what()});
      }

      try {
        int fpe_m = selection->candidates.front().m;
        double best = selection->candidates.front().criteria.fpe;
        for (const auto& candidate : selection->candidates) {
          if (candidate.criteria.fpe < best) {
            best = candidate.criteria.fpe;
            fpe_m = candidate.m;
          }
        }
        const TimeSeries cause_irf = stage_series(cause_raw,
                                                  transforms.at("irf"));
        const TimeSeries effect_irf = stage_series(effect_raw,
                                                   transforms.at("irf"));
        const auto model = fit_var({cause_irf, effect_irf}, fpe_m, spec);
        for (int direction = 0; direction < 2; ++direction) {
          const std::vector<std::string> ordering =
              direction == 0
                  ? std::vector<std::string>{pair.cause, pair.effect}
                  : std::vector<std::string>{pair.effect, pair.cause};
          const auto seed =
              derive_stream_seed(config.seed, (std::uint64_t)(streams + direction));
          const auto fan =
              irf_bootstrap(model, ordering, config.irf.horizon,
                            config.irf.replications, config.irf.level, seed,
                            config.irf.cumulative);
          const double own0 = fan[0].point(0);
          const double scale = 0.01 / own0;
          for (int i = 0; i < 2; ++i) {
            const auto& r = fan[i];
            IrfSummary summary;
            summary.pair = pair_label;
            summary.impulse = r.impulse;
            summary.response = r.response;
            summary.horizon = r.horizon;
            summary.cumulative = r.cumulative;
            summary.level = r.level;
            summary.replications = r.replications;
            summary.seed = r.seed;
            summary.discarded = r.discarded;
            summary.shock = 0.01;
            summary.point = to_std(r.point * scale);
            summary.lower = to_std(r.lower * scale);
            summary.upper = to_std(r.upper * scale);
            report.irfs.push_back(std::move(summary));
          }
        }
      } catch (const std::exception& e) {
        report.failures.push_back({pair_label, "irf", e.what()});
      }
    }
  }
  return report;
}

}  // namespace cfvc
