#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfvc/ingest.hpp"
#include "cfvc/report.hpp"
#include "cfvc/unit_root.hpp"

namespace cfvc {

inline constexpr const char* kVersion = "0.1.0";

/// One monthly volume series built from the transaction files: a source,
/// an optional merged-category filter and a segmentation rule.
struct SeriesConfig {
  std::string name;
  Source source = Source::crowdfunding;
  std::optional<MergedCategory> category;  // absent keeps every category
  SegmentRule segment = SegmentRule::all();
};

/// Directed hypothesis; causality runs in both directions regardless, the
/// orientation fixes row order and impulse ordering.
struct PairConfig {
  std::string cause;
  std::string effect;
};

struct IrfConfig {
  int horizon = 12;
  int replications = 500;
  double level = 0.90;
  bool cumulative = true;
};

struct PipelineConfig {
  std::string crowdfunding_csv;
  std::string venture_capital_csv;
  std::string mapping_csv;
  std::string output_dir = "cfvc_out";

  YearMonth window_start{2012, 4};
  YearMonth window_end{2015, 6};
  double keep_quantile = 0.99;
  bool trim_before_segmentation = true;
  int max_lag = 6;
  std::string d_max_policy = "1";  // non-negative integer, or "auto"
  DeterministicSpec deterministic_spec = DeterministicSpec::constant_and_trend;
  std::map<std::string, std::string> transforms;  // stage -> levels | log
  IrfConfig irf;
  std::uint64_t seed = 1;

  std::vector<SeriesConfig> series;
  std::vector<PairConfig> pairs;
};

/// The stock analysis plan used when the config lists no series: totals,
/// stage splits of the venture side, and the three category splits on both
/// sides.
std::vector<SeriesConfig> default_series();

/// Default pairs over default_series(): totals, totals against each stage
/// split, and the per-category pairs.
std::vector<PairConfig> default_pairs();

std::string to_string(DeterministicSpec spec);

/// Stage transform lookup with defaults: correlation on levels, the other
/// stages on logs.
std::map<std::string, std::string> effective_transforms(
    const std::map<std::string, std::string>& overrides);

/// Reads a JSON config file.  Only inputs.crowdfunding / venture_capital /
/// mapping are mandatory; everything else falls back to the defaults
/// above.  Unknown keys are rejected.  Throws ConfigInvalid.
PipelineConfig load_config(const std::string& path);

/// Structural checks (files exist, window ordered, ranges sane, pairs
/// reference configured series).  Empty result means the config is valid.
std::vector<std::string> validate_config(const PipelineConfig& config);

/// FNV-1a over the canonical serialization of the effective config, hex
/// encoded.  Identical effective configs hash identically.
std::string config_hash(const PipelineConfig& config);

/// Runs ingest, descriptives, correlations, unit roots, lag selection,
/// Granger causality with the lag-window robustness check, Johansen rank
/// tests and bootstrapped impulse responses for every configured pair.
/// Stage errors are recorded in report.failures per pair instead of
/// aborting the run; ConfigInvalid is thrown up front.
RunReport run_pipeline(const PipelineConfig& config);

}  // namespace cfvc
