#include "cfvc/demo.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfvc/errors.hpp"
#include "cfvc/ingest.hpp"
#include "cfvc/rng.hpp"
#include "cfvc/simulate.hpp"

namespace cfvc {

namespace {

constexpr int kMonths = 39;  // 2012-04 .. 2015-06
const YearMonth kStart{2012, 4};

struct Row {
  Date date;
  double amount = 0.0;
  std::string category;
  std::string round_type;  // empty on the crowdfunding side
};

std::string csv_field(const std::string& text) {
  if (text.find(',') == std::string::npos) return text;
  return "\"" + text + "\"";
}

void write_rows(const std::string& path, const std::vector<Row>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "date,amount,category,round_type\n";
  char amount[64];
  for (const auto& row : rows) {
    std::snprintf(amount, sizeof amount, "%.2f", row.amount);
    out << row.date.str() << ',' << amount << ',' << csv_field(row.category)
        << ',' << row.round_type << '\n';
  }
}

Date day_in(const YearMonth& ym, GaussianRng& rng) {
  return Date{ym.year, ym.month, 1 + (int)rng.below(28)};
}

/// Splits volume into 6..12 positive amounts that sum to it.
std::vector<double> split_amounts(double volume, GaussianRng& rng) {
  const int count = 6 + (int)rng.below(7);
  std::vector<double> weights(count);
  double total = 0.0;
  for (auto& w : weights) {
    w = rng.uniform();
    total += w;
  }
  for (auto& w : weights) w = volume * w / total;
  return weights;
}

const char* pick(std::initializer_list<const char*> options, GaussianRng& rng) {
  return options.begin()[rng.below(options.size())];
}

}  // namespace

DemoDataset write_demo_dataset(const std::string& dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  // Latent monthly log-volume drivers per category.  Hardware carries the
  // causal link (crowdfunding leads by construction); media follows two
  // independent random walks; fashion two independent AR(1) processes.
  const auto hardware =
      generate(Dgp::causal_pair(kMonths, derive_stream_seed(seed, 1)));
  const auto media_cf = generate(
      Dgp::random_walk(kMonths, derive_stream_seed(seed, 2), 0.15)).front();
  const auto media_vc = generate(
      Dgp::random_walk(kMonths, derive_stream_seed(seed, 3), 0.15)).front();
  const auto fashion_cf = generate(
      Dgp::ar({0.6}, kMonths, derive_stream_seed(seed, 4), 0.4)).front();
  const auto fashion_vc = generate(
      Dgp::ar({0.6}, kMonths, derive_stream_seed(seed, 5), 0.4)).front();

  GaussianRng rng(derive_stream_seed(seed, 6));
  std::vector<Row> cf_rows;
  std::vector<Row> vc_rows;

  for (int t = 0; t < kMonths; ++t) {
    const YearMonth ym = kStart.plus(t);
    struct Slice {
      bool venture;
      double volume;
      const char* categories[2];
    };
    const Slice slices[] = {
        {false, std::exp(11.0 + 0.30 * hardware[0].values()(t)),
         {"gadgets", "robots"}},
        {false, std::exp(11.5 + media_cf.values()(t)), {"film", "music"}},
        {false, std::exp(10.5 + 0.50 * fashion_cf.values()(t)),
         {"apparel", "wearables"}},
        {true, std::exp(11.8 + 0.30 * hardware[1].values()(t)),
         {"Hardware", "Semiconductors"}},
        {true, std::exp(12.3 + media_vc.values()(t)),
         {"Apps", "Enterprise Software"}},
        {true, std::exp(11.2 + 0.50 * fashion_vc.values()(t)),
         {"Beauty", "Sporting Goods"}},
    };
    for (const auto& slice : slices) {
      const auto amounts = split_amounts(slice.volume, rng);
      for (std::size_t i = 0; i < amounts.size(); ++i) {
        Row row;
        row.date = day_in(ym, rng);
        row.amount = amounts[i];
        row.category = slice.categories[rng.below(2)];
        if (!slice.venture) {
          cf_rows.push_back(std::move(row));
          continue;
        }
        // The leading rows pin both stage segments so neither monthly
        // series can hit an empty month.
        if (i < 2) {
          row.round_type = pick({"angel", "seed"}, rng);
        } else if (i < 4) {
          row.round_type = pick({"early stage venture", "expansion"}, rng);
        } else {
          row.round_type = rng.below(100) < 45
                               ? pick({"angel", "seed"}, rng)
                               : pick({"early stage venture", "expansion",
                                       "later stage venture"}, rng);
        }
        vc_rows.push_back(std::move(row));
      }
    }
    // One oversized deal per month feeds the top-percentile trim and keeps
    // the below-threshold segment strictly smaller than the total.
    Row mega;
    mega.date = day_in(ym, rng);
    mega.amount = std::exp(13.5 + 0.5 * rng.normal());
    mega.category = "Enterprise Software";
    mega.round_type = "later stage venture";
    vc_rows.push_back(std::move(mega));
  }

  // Categories missing from the mapping file keep coverage below 1.
  for (int t = 0; t < kMonths; t += 5) {
    const YearMonth ym = kStart.plus(t);
    cf_rows.push_back({day_in(ym, rng), 900.0 + 40.0 * (double)t, "food", ""});
    vc_rows.push_back({day_in(ym, rng), 52000.0 + 100.0 * (double)t, "Other",
                       "expansion"});
  }
  // Out-of-window rows exercise the dropped-row accounting.
  for (int t : {-3, -2, -1, kMonths, kMonths + 1}) {
    const YearMonth ym = kStart.plus(t);
    cf_rows.push_back({day_in(ym, rng), 4000.0, "film", ""});
    vc_rows.push_back({day_in(ym, rng), 87000.0, "Apps", "seed"});
  }

  DemoDataset dataset;
  const auto path = [&dir](const char* name) {
    return (fs::path(dir) / name).string();
  };
  dataset.crowdfunding_csv = path("demo_crowdfunding.csv");
  dataset.venture_capital_csv = path("demo_venture_capital.csv");
  dataset.mapping_csv = path("demo_mapping.csv");
  dataset.config_json = path("demo_config.json");

  write_rows(dataset.crowdfunding_csv, cf_rows);
  write_rows(dataset.venture_capital_csv, vc_rows);

  {
    std::ofstream out(dataset.mapping_csv, std::ios::binary);
    if (!out) throw IoError("cannot open " + dataset.mapping_csv);
    out << "source,raw_category,merged_category\n"
           "crowdfunding,gadgets,hardware\n"
           "crowdfunding,robots,hardware\n"
           "crowdfunding,film,media\n"
           "crowdfunding,music,media\n"
           "crowdfunding,apparel,fashion\n"
           "crowdfunding,wearables,fashion\n"
           "venture_capital,Hardware,hardware\n"
           "venture_capital,Semiconductors,hardware\n"
           "venture_capital,Apps,media\n"
           "venture_capital,Enterprise Software,media\n"
           "venture_capital,Beauty,fashion\n"
           "venture_capital,Sporting Goods,fashion\n";
  }

  nlohmann::ordered_json config;
  config["inputs"] = {{"crowdfunding", dataset.crowdfunding_csv},
                      {"venture_capital", dataset.venture_capital_csv},
                      {"mapping", dataset.mapping_csv}};
  config["window"] = {{"start", "2012-04"}, {"end", "2015-06"}};
  config["seed"] = seed;
  config["output_dir"] = dir;
  config["irf"] = {{"replications", 200}};
  config["series"] = nlohmann::ordered_json::array();
  const auto add_series = [&config](const char* name, const char* source,
                                    const char* category, const char* segment) {
    nlohmann::ordered_json entry = {{"name", name}, {"source", source}};
    if (category) entry["category"] = category;
    if (segment) entry["segment"] = segment;
    config["series"].push_back(entry);
  };
  add_series("cf_sum", "crowdfunding", nullptr, nullptr);
  add_series("vc_sum", "venture_capital", nullptr, nullptr);
  add_series("vc_angel_seed", "venture_capital", nullptr, "angel_seed");
  add_series("vc_early_growth", "venture_capital", nullptr, "early_growth");
  add_series("cf_hardware", "crowdfunding", "hardware", nullptr);
  add_series("vc_hardware", "venture_capital", "hardware", nullptr);
  add_series("cf_media", "crowdfunding", "media", nullptr);
  add_series("vc_media", "venture_capital", "media", nullptr);
  add_series("cf_fashion", "crowdfunding", "fashion", nullptr);
  add_series("vc_fashion", "venture_capital", "fashion", nullptr);
  config["series"].push_back({{"name", "vc_small"},
                              {"source", "venture_capital"},
                              {"segment", "small_below_threshold"},
                              {"threshold", 500000.0}});
  config["pairs"] = nlohmann::ordered_json::array();
  for (const auto& [cause, effect] :
       {std::pair<const char*, const char*>{"cf_sum", "vc_sum"},
        {"cf_sum", "vc_angel_seed"},
        {"cf_sum", "vc_early_growth"},
        {"cf_sum", "vc_small"},
        {"cf_hardware", "vc_hardware"},
        {"cf_media", "vc_media"},
        {"cf_fashion", "vc_fashion"}}) {
    config["pairs"].push_back({{"cause", cause}, {"effect", effect}});
  }
  {
    std::ofstream out(dataset.config_json, std::ios::binary);
    if (!out) throw IoError("cannot open " + dataset.config_json);
    out << config.dump(2) << "\n";
  }
  return dataset;
}

}  // namespace cfvc
