#include "cfvc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cfvc/errors.hpp"
#include "cfvc/numerics.hpp"

namespace cfvc {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

int days_in_month(int year, int month) {
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap =
      (year % 4 == 0 && year % 100 != 0) || (year % 400 == 0);
  if (month == 2 && leap) return 29;
  return kDays[month - 1];
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return (char)std::tolower(c); });
  return s;
}

std::string strip(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

/// Splits one CSV record.  Fields may be double-quoted to protect embedded
/// commas; "" inside a quoted field is a literal quote.
std::vector<std::string> split_csv(const std::string& line, long line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) {
    throw SchemaViolation("line " + std::to_string(line_no) +
                          ": unterminated quoted field");
  }
  fields.push_back(field);
  return fields;
}

double parse_amount(const std::string& text, long line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw SchemaViolation("line " + std::to_string(line_no) +
                          ": bad amount '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw SchemaViolation("line " + std::to_string(line_no) +
                          ": bad amount '" + text + "'");
  }
  if (value < 0.0) {
    throw NegativeAmount("line " + std::to_string(line_no) + ": amount " +
                         text + " is negative");
  }
  return value;
}

MergedCategory parse_merged(const std::string& text, long line_no) {
  const std::string t = strip(text);
  if (t == "hardware" || t == "Hardware and consumer electronics") {
    return MergedCategory::hardware;
  }
  if (t == "media" || t == "Media, arts and entertainment") {
    return MergedCategory::media;
  }
  if (t == "fashion" || t == "Fashion, wellness and personal care") {
    return MergedCategory::fashion;
  }
  if (t == "unmapped") return MergedCategory::unmapped;
  throw SchemaViolation("line " + std::to_string(line_no) +
                        ": unknown merged category '" + t + "'");
}

Source parse_source(const std::string& text, long line_no) {
  const std::string t = lower(strip(text));
  if (t == "crowdfunding" || t == "cf") return Source::crowdfunding;
  if (t == "venture_capital" || t == "vc") return Source::venture_capital;
  throw SchemaViolation("line " + std::to_string(line_no) +
                        ": unknown source '" + text + "'");
}

}  // namespace

Date Date::parse(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw BadDate("expected YYYY-MM-DD, got '" + text + "'");
  }
  const std::string y = text.substr(0, 4);
  const std::string m = text.substr(5, 2);
  const std::string d = text.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) {
    throw BadDate("expected YYYY-MM-DD, got '" + text + "'");
  }
  Date date;
  date.year = std::stoi(y);
  date.month = std::stoi(m);
  date.day = std::stoi(d);
  if (date.month < 1 || date.month > 12) {
    throw BadDate("month out of range in '" + text + "'");
  }
  if (date.day < 1 || date.day > days_in_month(date.year, date.month)) {
    throw BadDate("day out of range in '" + text + "'");
  }
  return date;
}

std::string Date::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string to_string(Source source) {
  return source == Source::crowdfunding ? "crowdfunding" : "venture_capital";
}

std::string to_string(MergedCategory category) {
  switch (category) {
    case MergedCategory::hardware: return "hardware";
    case MergedCategory::media: return "media";
    case MergedCategory::fashion: return "fashion";
    case MergedCategory::unmapped: return "unmapped";
  }
  throw Error("to_string: bad MergedCategory");
}

CategoryMapping CategoryMapping::from_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open mapping file " + path);
  std::string line;
  if (!std::getline(file, line)) {
    throw SchemaViolation("mapping file " + path + " is empty");
  }
  {
    auto header = split_csv(line, 1);
    for (auto& h : header) h = lower(strip(h));
    if (header != std::vector<std::string>{"source", "raw_category",
                                           "merged_category"}) {
      throw SchemaViolation(
          "mapping file header must be source,raw_category,merged_category");
    }
  }
  CategoryMapping mapping;
  long line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    auto fields = split_csv(line, line_no);
    if (fields.size() != 3) {
      throw SchemaViolation("line " + std::to_string(line_no) + ": expected " +
                            "3 fields, got " + std::to_string(fields.size()));
    }
    mapping.add(parse_source(fields[0], line_no), strip(fields[1]),
                parse_merged(fields[2], line_no));
  }
  return mapping;
}

void CategoryMapping::add(Source source, const std::string& raw,
                          MergedCategory merged) {
  const auto key = std::make_pair(source, raw);
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second != merged) {
    throw SchemaViolation("raw category '" + raw + "' (" + to_string(source) +
                          ") mapped to both " + to_string(it->second) +
                          " and " + to_string(merged));
  }
  entries_[key] = merged;
}

MergedCategory CategoryMapping::lookup(Source source,
                                       const std::string& raw) const {
  auto it = entries_.find(std::make_pair(source, raw));
  return it == entries_.end() ? MergedCategory::unmapped : it->second;
}

SegmentRule SegmentRule::all() { return {SegmentKind::all, std::nullopt}; }

SegmentRule SegmentRule::angel_seed() {
  return {SegmentKind::angel_seed, std::nullopt};
}

SegmentRule SegmentRule::early_growth() {
  return {SegmentKind::early_growth, std::nullopt};
}

SegmentRule SegmentRule::small_below_threshold(double threshold) {
  if (!(threshold > 0.0)) {
    throw InvalidSpec("segment threshold must be positive");
  }
  return {SegmentKind::small_below_threshold, threshold};
}

std::vector<Transaction> parse_transactions(const std::string& path,
                                            Source source) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open transaction file " + path);
  std::string line;
  if (!std::getline(file, line)) {
    throw SchemaViolation("transaction file " + path + " is empty");
  }
  {
    auto header = split_csv(line, 1);
    for (auto& h : header) h = lower(strip(h));
    if (header !=
        std::vector<std::string>{"date", "amount", "category", "round_type"}) {
      throw SchemaViolation(
          "transaction file header must be date,amount,category,round_type");
    }
  }
  std::vector<Transaction> txns;
  long line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    auto fields = split_csv(line, line_no);
    if (fields.size() != 4) {
      throw SchemaViolation("line " + std::to_string(line_no) + ": expected " +
                            "4 fields, got " + std::to_string(fields.size()));
    }
    Transaction txn;
    try {
      txn.date = Date::parse(strip(fields[0]));
    } catch (const BadDate& e) {
      throw BadDate("line " + std::to_string(line_no) + ": " + e.what());
    }
    txn.amount = parse_amount(strip(fields[1]), line_no);
    txn.raw_category = strip(fields[2]);
    txn.source = source;
    const std::string round = strip(fields[3]);
    if (!round.empty()) txn.round_type = round;
    txns.push_back(std::move(txn));
  }
  return txns;
}

std::vector<Transaction> trim_top_percentile(
    const std::vector<Transaction>& txns, double keep_quantile) {
  if (!(keep_quantile > 0.0 && keep_quantile <= 1.0)) {
    throw InvalidSpec("keep_quantile must lie in (0, 1]");
  }
  if (txns.empty()) throw EmptyInput("trim_top_percentile: no transactions");
  std::vector<double> cf_amounts, vc_amounts;
  for (const auto& txn : txns) {
    (txn.source == Source::crowdfunding ? cf_amounts : vc_amounts)
        .push_back(txn.amount);
  }
  const double cf_cut = cf_amounts.empty()
                            ? 0.0
                            : quantile_type7(cf_amounts, keep_quantile);
  const double vc_cut = vc_amounts.empty()
                            ? 0.0
                            : quantile_type7(vc_amounts, keep_quantile);
  std::vector<Transaction> kept;
  kept.reserve(txns.size());
  for (const auto& txn : txns) {
    const double cut =
        txn.source == Source::crowdfunding ? cf_cut : vc_cut;
    if (txn.amount <= cut) kept.push_back(txn);
  }
  return kept;
}

MappingResult apply_mapping(const std::vector<Transaction>& txns,
                            const CategoryMapping& mapping) {
  MappingResult result;
  result.transactions = txns;
  std::size_t mapped = 0;
  for (auto& txn : result.transactions) {
    txn.merged = mapping.lookup(txn.source, txn.raw_category);
    if (txn.merged != MergedCategory::unmapped) ++mapped;
  }
  if (!txns.empty()) {
    result.coverage = (double)mapped / (double)txns.size();
  }
  return result;
}

std::vector<Transaction> segment(const std::vector<Transaction>& txns,
                                 const SegmentRule& rule) {
  if (rule.kind == SegmentKind::small_below_threshold) {
    if (!rule.threshold || !(*rule.threshold > 0.0)) {
      throw InvalidSpec("small_below_threshold rule needs a positive threshold");
    }
  } else if (rule.threshold) {
    throw InvalidSpec("threshold only applies to small_below_threshold");
  }
  if (rule.kind == SegmentKind::all) return txns;

  std::vector<Transaction> kept;
  kept.reserve(txns.size());
  for (const auto& txn : txns) {
    bool keep = false;
    switch (rule.kind) {
      case SegmentKind::small_below_threshold:
        keep = txn.amount < *rule.threshold;
        break;
      case SegmentKind::angel_seed:
      case SegmentKind::early_growth: {
        if (!txn.round_type) {
          if (txn.source == Source::venture_capital) {
            throw MissingRoundType("venture capital row dated " +
                                   txn.date.str() + " has no round_type");
          }
          keep = false;
          break;
        }
        const std::string round = lower(*txn.round_type);
        const bool early_stage = round == "angel" || round == "seed";
        keep = (rule.kind == SegmentKind::angel_seed) == early_stage;
        break;
      }
      case SegmentKind::all:
        keep = true;
        break;
    }
    if (keep) kept.push_back(txn);
  }
  return kept;
}

MonthlyAggregate aggregate_monthly(const std::vector<Transaction>& txns,
                                   const YearMonth& start,
                                   const YearMonth& end,
                                   const std::string& label) {
  if (end < start) {
    throw InvertedWindow("window " + start.str() + ".." + end.str() +
                         " ends before it starts");
  }
  const int months = end.index() - start.index() + 1;
  Vector values = Vector::Zero(months);
  long dropped = 0;
  for (const auto& txn : txns) {
    const int offset = txn.date.year_month().index() - start.index();
    if (offset < 0 || offset >= months) {
      ++dropped;
      continue;
    }
    values(offset) += txn.amount;
  }
  return {TimeSeries(label, start, std::move(values)), dropped};
}

}  // namespace cfvc
