#pragma once

#include <string>

#include "cfvc/numerics.hpp"

namespace cfvc {

/// Calendar month, 1-based.
struct YearMonth {
  int year = 0;
  int month = 1;

  static YearMonth parse(const std::string& text);  // "YYYY-MM"
  std::string str() const;

  /// Months elapsed since year 0, used for arithmetic and ordering.
  int index() const { return year * 12 + (month - 1); }
  YearMonth plus(int months) const;

  friend bool operator==(const YearMonth& a, const YearMonth& b) {
    return a.index() == b.index();
  }
  friend bool operator<(const YearMonth& a, const YearMonth& b) {
    return a.index() < b.index();
  }
  friend bool operator<=(const YearMonth& a, const YearMonth& b) {
    return a.index() <= b.index();
  }
};

/// Evenly spaced monthly series with no gaps.  Values are stored densely;
/// the month of values()(i) is start().plus(i).
class TimeSeries {
 public:
  TimeSeries(std::string label, YearMonth start, Vector values);

  const std::string& label() const { return label_; }
  const YearMonth& start() const { return start_; }
  const Vector& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  YearMonth month_at(Eigen::Index i) const { return start_.plus((int)i); }

 private:
  std::string label_;
  YearMonth start_;
  Vector values_;
};

/// Natural log of every observation.  Throws NonPositiveValue if any
/// observation is <= 0.
TimeSeries log_transform(const TimeSeries& series);

/// order-fold first differencing; the result starts `order` months later
/// and is shorter by `order`.
TimeSeries difference(const TimeSeries& series, int order = 1);

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, from t = rho sqrt((n-2)/(1-rho^2))
  Eigen::Index n = 0;
};

/// Pearson correlation of two aligned series.
CorrelationResult pearson(const TimeSeries& a, const TimeSeries& b);

}  // namespace cfvc
