#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cfvc/time_series.hpp"

#ifndef CFVC_FIXTURE_DIR
#error "CFVC_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace fixtures {

/// Loads a committed fixture CSV (month,label...,label columns) as one
/// TimeSeries per value column.
inline std::vector<cfvc::TimeSeries> load(const std::string& name) {
  const std::string path = std::string(CFVC_FIXTURE_DIR) + "/" + name + ".csv";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture: " + path);

  std::string line;
  std::getline(in, line);
  std::vector<std::string> labels;
  {
    std::stringstream header(line);
    std::string cell;
    std::getline(header, cell, ',');  // month column
    while (std::getline(header, cell, ',')) labels.push_back(cell);
  }

  std::vector<std::vector<double>> columns(labels.size());
  std::string first_month;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    if (first_month.empty()) first_month = cell;
    for (auto& col : columns) {
      std::getline(row, cell, ',');
      col.push_back(std::stod(cell));
    }
  }

  std::vector<cfvc::TimeSeries> out;
  const auto start = cfvc::YearMonth::parse(first_month);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Eigen::Map<const cfvc::Vector> v(columns[i].data(),
                                     (Eigen::Index)columns[i].size());
    out.emplace_back(labels[i], start, cfvc::Vector(v));
  }
  return out;
}

inline std::string dir() { return CFVC_FIXTURE_DIR; }

}  // namespace fixtures
