#pragma once

#include <cstdint>
#include <string>

namespace cfvc {

struct DemoDataset {
  std::string crowdfunding_csv;
  std::string venture_capital_csv;
  std::string mapping_csv;
  std::string config_json;
};

/// Writes a synthetic transaction dataset plus a ready-to-run config into
/// dir.  The data exercises every pipeline stage: three merged categories
/// (one with a built-in one-month causal link from the crowdfunding side),
/// stage and deal-size segments on the venture side, oversized deals for
/// the percentile trim, out-of-window rows and a few categories absent
/// from the mapping file.
DemoDataset write_demo_dataset(const std::string& dir, std::uint64_t seed = 7);

}  // namespace cfvc
