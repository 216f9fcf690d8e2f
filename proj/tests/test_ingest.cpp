#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cfvc/ingest.hpp"

using cfvc::CategoryMapping;
using cfvc::Date;
using cfvc::MergedCategory;
using cfvc::SegmentRule;
using cfvc::Source;
using cfvc::Transaction;
using cfvc::YearMonth;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "cfvc_ingest_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

Transaction txn(const std::string& date, double amount,
                Source source = Source::crowdfunding,
                const std::string& round = "") {
  Transaction t;
  t.date = Date::parse(date);
  t.amount = amount;
  t.source = source;
  if (!round.empty()) t.round_type = round;
  return t;
}

}  // namespace

TEST_CASE("date parsing accepts valid dates and rejects malformed ones") {
  const auto d = Date::parse("2013-07-09");
  CHECK(d.year == 2013);
  CHECK(d.month == 7);
  CHECK(d.day == 9);
  CHECK(d.str() == "2013-07-09");
  CHECK(d.year_month() == YearMonth{2013, 7});

  CHECK(Date::parse("2012-02-29").day == 29);
  CHECK(Date::parse("2000-02-29").day == 29);
  CHECK_THROWS_AS(Date::parse("2013-02-29"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("1900-02-29"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("2013-04-31"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("2013-13-01"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("2013-00-01"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("2013-01-00"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("2013/01/02"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("2013-1-02"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse("13-01-02"), cfvc::BadDate);
  CHECK_THROWS_AS(Date::parse(""), cfvc::BadDate);
}

TEST_CASE("transaction files parse row by row with line numbers on errors") {
  const auto path = write_file("ok.csv",
                               "date,amount,category,round_type\n"
                               "2012-05-01,1000.50,technology/gadgets,\n"
                               "\n"
                               "2012-05-02,250,music/jazz,\n"
                               "2013-01-31,9000,design,\n");
  const auto txns = cfvc::parse_transactions(path, Source::crowdfunding);
  REQUIRE(txns.size() == 3);
  CHECK(txns[0].date.str() == "2012-05-01");
  CHECK(txns[0].amount == doctest::Approx(1000.50));
  CHECK(txns[0].raw_category == "technology/gadgets");
  CHECK(txns[0].source == Source::crowdfunding);
  CHECK_FALSE(txns[0].round_type.has_value());
  CHECK(txns[0].merged == MergedCategory::unmapped);
  CHECK(txns[2].raw_category == "design");
}

TEST_CASE("header-only file yields an empty list") {
  const auto path = write_file("empty.csv", "date,amount,category,round_type\n");
  CHECK(cfvc::parse_transactions(path, Source::crowdfunding).empty());
}

TEST_CASE("round types and quoted categories survive parsing") {
  const auto path = write_file("vc.csv",
                               "date,amount,category,round_type\r\n"
                               "2013-03-15,500000,Consumer Electronics,Seed\r\n"
                               "2013-04-01,2500000,\"Games\",Venture\r\n");
  const auto txns = cfvc::parse_transactions(path, Source::venture_capital);
  REQUIRE(txns.size() == 2);
  CHECK(txns[0].round_type.value() == "Seed");
  CHECK(txns[0].source == Source::venture_capital);
  CHECK(txns[1].raw_category == "Games");
  CHECK(txns[1].round_type.value() == "Venture");
}

TEST_CASE("malformed transaction rows are rejected with their line number") {
  const auto negative = write_file("neg.csv",
                                   "date,amount,category,round_type\n"
                                   "2012-05-01,10,art,\n"
                                   "2012-05-02,-5,art,\n");
  CHECK_THROWS_WITH_AS(
      cfvc::parse_transactions(negative, Source::crowdfunding),
      doctest::Contains("line 3"), cfvc::NegativeAmount);

  const auto bad_date = write_file("baddate.csv",
                                   "date,amount,category,round_type\n"
                                   "2012-14-01,10,art,\n");
  CHECK_THROWS_WITH_AS(
      cfvc::parse_transactions(bad_date, Source::crowdfunding),
      doctest::Contains("line 2"), cfvc::BadDate);

  const auto bad_amount = write_file("badamount.csv",
                                     "date,amount,category,round_type\n"
                                     "2012-05-01,12x,art,\n");
  CHECK_THROWS_AS(cfvc::parse_transactions(bad_amount, Source::crowdfunding),
                  cfvc::SchemaViolation);

  const auto short_row = write_file("short.csv",
                                    "date,amount,category,round_type\n"
                                    "2012-05-01,10\n");
  CHECK_THROWS_AS(cfvc::parse_transactions(short_row, Source::crowdfunding),
                  cfvc::SchemaViolation);

  const auto bad_header = write_file("badheader.csv",
                                     "date,amount,category\n"
                                     "2012-05-01,10,art\n");
  CHECK_THROWS_AS(cfvc::parse_transactions(bad_header, Source::crowdfunding),
                  cfvc::SchemaViolation);

  CHECK_THROWS_AS(
      cfvc::parse_transactions("/nonexistent/nowhere.csv", Source::crowdfunding),
      cfvc::IoError);
}

TEST_CASE("top-percentile trim drops strictly-above-quantile amounts") {
  std::vector<Transaction> txns;
  for (int i = 1; i <= 100; ++i) {
    txns.push_back(txn("2013-06-15", (double)i));
  }

  SUBCASE("keep_quantile 1 is the identity") {
    CHECK(cfvc::trim_top_percentile(txns, 1.0).size() == 100);
  }
  SUBCASE("uniform 1..100 at 0.99 removes only the maximum") {
    const auto kept = cfvc::trim_top_percentile(txns, 0.99);
    REQUIRE(kept.size() == 99);
    CHECK(kept.back().amount == 99.0);
    CHECK(kept.front().amount == 1.0);
  }
  SUBCASE("equal amounts are never trimmed") {
    std::vector<Transaction> flat(40, txn("2013-06-15", 7.0));
    CHECK(cfvc::trim_top_percentile(flat, 0.5).size() == 40);
  }
  SUBCASE("quantiles are computed per source") {
    auto mixed = txns;
    mixed.push_back(txn("2013-06-15", 1.0e6, Source::venture_capital, "Seed"));
    const auto kept = cfvc::trim_top_percentile(mixed, 0.99);
    REQUIRE(kept.size() == 100);
    CHECK(kept.back().amount == 1.0e6);
    CHECK(kept.back().source == Source::venture_capital);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(cfvc::trim_top_percentile({}, 0.99), cfvc::EmptyInput);
    CHECK_THROWS_AS(cfvc::trim_top_percentile(txns, 0.0), cfvc::InvalidSpec);
    CHECK_THROWS_AS(cfvc::trim_top_percentile(txns, 1.5), cfvc::InvalidSpec);
  }
}

TEST_CASE("trim output shrinks monotonically with the kept quantile") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(10.0, 5.0e6);
  std::vector<Transaction> txns;
  for (int i = 0; i < 400; ++i) {
    txns.push_back(txn("2014-01-10", u(rng),
                       i % 3 == 0 ? Source::venture_capital
                                  : Source::crowdfunding,
                       i % 3 == 0 ? "Venture" : ""));
  }
  std::vector<Transaction> previous;
  for (double q : {0.80, 0.90, 0.95, 0.99, 1.0}) {
    auto kept = cfvc::trim_top_percentile(txns, q);
    if (!previous.empty()) {
      CHECK(kept.size() >= previous.size());
      std::multiset<double> larger;
      for (const auto& t : kept) larger.insert(t.amount);
      for (const auto& t : previous) {
        auto it = larger.find(t.amount);
        REQUIRE(it != larger.end());
        larger.erase(it);
      }
    }
    previous = std::move(kept);
  }
  CHECK(previous.size() == txns.size());
}

TEST_CASE("shipped category table maps the documented examples") {
  const auto mapping =
      CategoryMapping::from_csv(std::string(CFVC_DATA_DIR) +
                                "/category_mapping.csv");
  CHECK(mapping.size() == 269);

  CHECK(mapping.lookup(Source::crowdfunding, "technology/3d printing") ==
        MergedCategory::hardware);
  CHECK(mapping.lookup(Source::crowdfunding, "music/jazz") ==
        MergedCategory::media);
  CHECK(mapping.lookup(Source::crowdfunding, "fashion/ready-to-wear") ==
        MergedCategory::fashion);
  CHECK(mapping.lookup(Source::crowdfunding, "food") ==
        MergedCategory::unmapped);
  CHECK(mapping.lookup(Source::venture_capital, "Wearables") ==
        MergedCategory::unmapped);
  CHECK(mapping.lookup(Source::venture_capital, "Beauty") ==
        MergedCategory::fashion);
  CHECK(mapping.lookup(Source::venture_capital, "Robotics") ==
        MergedCategory::hardware);
  CHECK(mapping.lookup(Source::venture_capital, "Video Games") ==
        MergedCategory::media);

  SUBCASE("the same raw name can map differently per source") {
    CHECK(mapping.lookup(Source::crowdfunding, "design") ==
          MergedCategory::hardware);
    CHECK(mapping.lookup(Source::venture_capital, "Design") ==
          MergedCategory::media);
    CHECK(mapping.lookup(Source::venture_capital, "design") ==
          MergedCategory::unmapped);
  }
}

TEST_CASE("mapping construction enforces one target per raw category") {
  CategoryMapping mapping;
  mapping.add(Source::crowdfunding, "widgets", MergedCategory::hardware);
  CHECK_NOTHROW(
      mapping.add(Source::crowdfunding, "widgets", MergedCategory::hardware));
  CHECK_THROWS_AS(
      mapping.add(Source::crowdfunding, "widgets", MergedCategory::media),
      cfvc::SchemaViolation);
  CHECK_NOTHROW(
      mapping.add(Source::venture_capital, "widgets", MergedCategory::media));

  const auto conflicting = write_file("conflict.csv",
                                      "source,raw_category,merged_category\n"
                                      "cf,art,media\n"
                                      "cf,art,hardware\n");
  CHECK_THROWS_AS(CategoryMapping::from_csv(conflicting),
                  cfvc::SchemaViolation);
  CHECK_THROWS_AS(CategoryMapping::from_csv("/nonexistent/map.csv"),
                  cfvc::IoError);

  const auto bad_merged = write_file("badmerged.csv",
                                     "source,raw_category,merged_category\n"
                                     "cf,art,medias\n");
  CHECK_THROWS_AS(CategoryMapping::from_csv(bad_merged), cfvc::SchemaViolation);
}

TEST_CASE("apply_mapping annotates rows and reports coverage") {
  CategoryMapping mapping;
  mapping.add(Source::crowdfunding, "art", MergedCategory::media);
  mapping.add(Source::crowdfunding, "crafts", MergedCategory::hardware);

  std::vector<Transaction> txns;
  txns.push_back(txn("2013-01-05", 10));
  txns.back().raw_category = "art";
  txns.push_back(txn("2013-01-06", 20));
  txns.back().raw_category = "crafts";
  txns.push_back(txn("2013-01-07", 30));
  txns.back().raw_category = "food";
  txns.push_back(txn("2013-01-08", 40));
  txns.back().raw_category = "art";

  const auto result = cfvc::apply_mapping(txns, mapping);
  REQUIRE(result.transactions.size() == 4);
  CHECK(result.transactions[0].merged == MergedCategory::media);
  CHECK(result.transactions[1].merged == MergedCategory::hardware);
  CHECK(result.transactions[2].merged == MergedCategory::unmapped);
  CHECK(result.transactions[3].merged == MergedCategory::media);
  CHECK(result.coverage == doctest::Approx(0.75));

  CHECK(cfvc::apply_mapping({}, mapping).coverage == 1.0);
}

TEST_CASE("segmentation filters by round stage and deal size") {
  std::vector<Transaction> txns;
  txns.push_back(txn("2013-02-01", 100000, Source::venture_capital, "Angel"));
  txns.push_back(txn("2013-02-02", 499999, Source::venture_capital, "Seed"));
  txns.push_back(txn("2013-02-03", 500000, Source::venture_capital, "Venture"));

  SUBCASE("all keeps everything") {
    CHECK(cfvc::segment(txns, SegmentRule::all()).size() == 3);
  }
  SUBCASE("angel_seed keeps angel and seed rounds") {
    const auto kept = cfvc::segment(txns, SegmentRule::angel_seed());
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].round_type.value() == "Angel");
    CHECK(kept[1].round_type.value() == "Seed");
  }
  SUBCASE("early_growth keeps the complement") {
    const auto kept = cfvc::segment(txns, SegmentRule::early_growth());
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].round_type.value() == "Venture");
  }
  SUBCASE("round comparison ignores case") {
    auto upper = txns;
    upper[1].round_type = "SEED";
    CHECK(cfvc::segment(upper, SegmentRule::angel_seed()).size() == 2);
  }
  SUBCASE("deal-size rule is strictly below the threshold") {
    const auto kept =
        cfvc::segment(txns, SegmentRule::small_below_threshold(500000));
    REQUIRE(kept.size() == 2);
    CHECK(kept[1].amount == 499999);
  }
  SUBCASE("venture rows without a round type abort stage rules") {
    auto missing = txns;
    missing[2].round_type.reset();
    CHECK_THROWS_AS(cfvc::segment(missing, SegmentRule::angel_seed()),
                    cfvc::MissingRoundType);
    CHECK_THROWS_AS(cfvc::segment(missing, SegmentRule::early_growth()),
                    cfvc::MissingRoundType);
    CHECK(cfvc::segment(missing, SegmentRule::all()).size() == 3);
    CHECK(
        cfvc::segment(missing, SegmentRule::small_below_threshold(1e9)).size() ==
        3);
  }
  SUBCASE("crowdfunding rows without a round type simply drop out") {
    auto mixed = txns;
    mixed.push_back(txn("2013-02-04", 50));
    CHECK(cfvc::segment(mixed, SegmentRule::angel_seed()).size() == 2);
  }
  SUBCASE("rule validation") {
    CHECK_THROWS_AS(SegmentRule::small_below_threshold(0.0), cfvc::InvalidSpec);
    CHECK_THROWS_AS(SegmentRule::small_below_threshold(-1.0),
                    cfvc::InvalidSpec);
    SegmentRule broken = SegmentRule::all();
    broken.threshold = 100.0;
    CHECK_THROWS_AS(cfvc::segment(txns, broken), cfvc::InvalidSpec);
    SegmentRule no_threshold{cfvc::SegmentKind::small_below_threshold,
                             std::nullopt};
    CHECK_THROWS_AS(cfvc::segment(txns, no_threshold), cfvc::InvalidSpec);
  }
}

TEST_CASE("monthly aggregation fills the window and counts drops") {
  std::vector<Transaction> txns;
  txns.push_back(txn("2012-04-03", 10));
  txns.push_back(txn("2012-04-28", 20));
  txns.push_back(txn("2012-07-01", 500));

  const auto agg =
      cfvc::aggregate_monthly(txns, {2012, 4}, {2012, 6}, "volume");
  CHECK(agg.series.label() == "volume");
  CHECK(agg.series.start() == YearMonth{2012, 4});
  REQUIRE(agg.series.size() == 3);
  CHECK(agg.series.values()(0) == 30.0);
  CHECK(agg.series.values()(1) == 0.0);
  CHECK(agg.series.values()(2) == 0.0);
  CHECK(agg.dropped == 1);

  const auto empty = cfvc::aggregate_monthly({}, {2012, 4}, {2012, 8}, "none");
  CHECK(empty.series.size() == 5);
  CHECK(empty.series.values().cwiseAbs().maxCoeff() == 0.0);
  CHECK(empty.dropped == 0);

  CHECK_THROWS_AS(cfvc::aggregate_monthly(txns, {2012, 6}, {2012, 4}, "x"),
                  cfvc::InvertedWindow);
}

TEST_CASE("aggregation matches a brute-force oracle on 1000 random rows") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> month_offset(-3, 44);
  std::uniform_int_distribution<int> day(1, 28);
  std::lognormal_distribution<double> amount(8.0, 1.4);

  const YearMonth start{2012, 4};
  const YearMonth end{2015, 6};
  std::vector<Transaction> txns;
  for (int i = 0; i < 1000; ++i) {
    const YearMonth ym = start.plus(month_offset(rng));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s-%02d", ym.str().c_str(), day(rng));
    txns.push_back(txn(buf, amount(rng),
                       i % 2 == 0 ? Source::crowdfunding
                                  : Source::venture_capital,
                       i % 2 == 0 ? "" : (i % 4 == 1 ? "Seed" : "Venture")));
  }

  const auto agg = cfvc::aggregate_monthly(txns, start, end, "all");
  REQUIRE(agg.series.size() == 39);

  std::map<int, double> oracle;
  long outside = 0;
  double in_window_total = 0.0;
  for (const auto& t : txns) {
    const int idx = t.date.year_month().index() - start.index();
    if (idx < 0 || idx >= 39) {
      ++outside;
      continue;
    }
    oracle[idx] += t.amount;
    in_window_total += t.amount;
  }
  CHECK(agg.dropped == outside);
  for (int i = 0; i < 39; ++i) {
    const auto it = oracle.find(i);
    const double want = it == oracle.end() ? 0.0 : it->second;
    CHECK(agg.series.values()(i) == want);
  }
  CHECK(agg.series.values().sum() ==
        doctest::Approx(in_window_total).epsilon(1e-6));

  SUBCASE("stage segments partition the venture-capital total") {
    std::vector<Transaction> vc;
    for (const auto& t : txns) {
      if (t.source == Source::venture_capital) vc.push_back(t);
    }
    const auto whole = cfvc::aggregate_monthly(vc, start, end, "vc");
    const auto early = cfvc::aggregate_monthly(
        cfvc::segment(vc, SegmentRule::angel_seed()), start, end, "vc_early");
    const auto growth = cfvc::aggregate_monthly(
        cfvc::segment(vc, SegmentRule::early_growth()), start, end, "vc_late");
    for (int i = 0; i < 39; ++i) {
      const double rebuilt = early.series.values()(i) + growth.series.values()(i);
      CHECK(rebuilt ==
            doctest::Approx(whole.series.values()(i)).epsilon(1e-6));
    }
  }
}
