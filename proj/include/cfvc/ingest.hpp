#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfvc/time_series.hpp"

namespace cfvc {

/// Calendar date, 1-based month and day.
struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  static Date parse(const std::string& text);  // "YYYY-MM-DD"
  std::string str() const;
  YearMonth year_month() const { return {year, month}; }
};

enum class Source { crowdfunding, venture_capital };

std::string to_string(Source source);

enum class MergedCategory { hardware, media, fashion, unmapped };

std::string to_string(MergedCategory category);

/// One funded project (crowdfunding) or one deal (venture capital).
struct Transaction {
  Date date;
  double amount = 0.0;  // USD
  std::string raw_category;
  Source source = Source::crowdfunding;
  std::optional<std::string> round_type;
  MergedCategory merged = MergedCategory::unmapped;
};

/// Raw-category -> merged-category table, keyed per source so the same raw
/// name can map differently for crowdfunding and venture capital data.
class CategoryMapping {
 public:
  /// Loads a `source,raw_category,merged_category` CSV.  The merged column
  /// accepts either the short tokens (hardware/media/fashion/unmapped) or
  /// the full sector names used in the shipped table.
  static CategoryMapping from_csv(const std::string& path);

  /// Throws SchemaViolation if `raw` is already mapped to a different
  /// category for this source.
  void add(Source source, const std::string& raw, MergedCategory merged);

  /// Total: unknown raw categories come back as unmapped.
  MergedCategory lookup(Source source, const std::string& raw) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<Source, std::string>, MergedCategory> entries_;
};

enum class SegmentKind { all, angel_seed, early_growth, small_below_threshold };

/// Row filter for building sub-sample series: by funding round stage or by
/// deal size.  `threshold` is required exactly for small_below_threshold.
struct SegmentRule {
  SegmentKind kind = SegmentKind::all;
  std::optional<double> threshold;

  static SegmentRule all();
  static SegmentRule angel_seed();
  static SegmentRule early_growth();
  static SegmentRule small_below_threshold(double threshold);
};

/// Reads a `date,amount,category,round_type` CSV and tags every row with
/// `source`.  Bad rows abort the parse; the thrown message carries the
/// 1-based line number.
std::vector<Transaction> parse_transactions(const std::string& path,
                                            Source source);

/// Drops transactions whose amount is strictly above the per-source
/// empirical `keep_quantile` quantile (linear interpolation between order
/// statistics).  Order is otherwise preserved.
std::vector<Transaction> trim_top_percentile(
    const std::vector<Transaction>& txns, double keep_quantile);

struct MappingResult {
  std::vector<Transaction> transactions;
  double coverage = 1.0;  // mapped rows / total rows
};

/// Annotates every transaction with its merged category.
MappingResult apply_mapping(const std::vector<Transaction>& txns,
                            const CategoryMapping& mapping);

/// Keeps the rows selected by `rule`.  Round-stage rules throw
/// MissingRoundType when a venture-capital row has no round_type.
std::vector<Transaction> segment(const std::vector<Transaction>& txns,
                                 const SegmentRule& rule);

struct MonthlyAggregate {
  TimeSeries series;
  long dropped = 0;  // transactions dated outside the window
};

/// Sums amounts into one value per month over [start, end]; months without
/// transactions hold 0.
MonthlyAggregate aggregate_monthly(const std::vector<Transaction>& txns,
                                   const YearMonth& start,
                                   const YearMonth& end,
                                   const std::string& label);

}  // namespace cfvc
