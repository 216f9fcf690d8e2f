#include "cfvc/time_series.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace cfvc {

YearMonth YearMonth::parse(const std::string& text) {
  int y = 0, m = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d%c", &y, &m, &extra) != 2 ||
      text.size() != 7 || text[4] != '-' || m < 1 || m > 12) {
    throw BadDate("not a YYYY-MM month: '" + text + "'");
  }
  return {y, m};
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::plus(int months) const {
  const int total = index() + months;
  int y = total / 12;
  int m = total % 12;
  if (m < 0) {
    m += 12;
    --y;
  }
  return {y, m + 1};
}

TimeSeries::TimeSeries(std::string label, YearMonth start, Vector values)
    : label_(std::move(label)), start_(start), values_(std::move(values)) {
  if (values_.size() == 0) {
    throw EmptyInput("time series '" + label_ + "' has no observations");
  }
  if (!values_.allFinite()) {
    throw Error("time series '" + label_ + "' contains non-finite values");
  }
  if (start_.month < 1 || start_.month > 12) {
    throw BadDate("time series '" + label_ + "' has an invalid start month");
  }
}

TimeSeries log_transform(const TimeSeries& series) {
  if ((series.values().array() <= 0.0).any()) {
    throw NonPositiveValue("log_transform: '" + series.label() +
                           "' has observations <= 0");
  }
  return TimeSeries("log(" + series.label() + ")", series.start(),
                    series.values().array().log().matrix());
}

TimeSeries difference(const TimeSeries& series, int order) {
  if (order < 1) {
    throw Error("difference: order must be >= 1");
  }
  if (series.size() <= order) {
    throw SeriesTooShort("difference: '" + series.label() + "' has " +
                         std::to_string(series.size()) +
                         " observations, need > " + std::to_string(order));
  }
  Vector v = series.values();
  for (int d = 0; d < order; ++d) {
    v = (v.tail(v.size() - 1) - v.head(v.size() - 1)).eval();
  }
  return TimeSeries("d" + std::to_string(order) + "(" + series.label() + ")",
                    series.start().plus(order), std::move(v));
}

CorrelationResult pearson(const TimeSeries& a, const TimeSeries& b) {
  if (!(a.start() == b.start()) || a.size() != b.size()) {
    throw Misaligned("pearson: '" + a.label() + "' and '" + b.label() +
                     "' cover different months");
  }
  const Eigen::Index n = a.size();
  if (n < 3) {
    throw SeriesTooShort("pearson: need at least 3 observations");
  }
  const Vector x = a.values().array() - a.values().mean();
  const Vector y = b.values().array() - b.values().mean();
  const double sx = x.squaredNorm();
  const double sy = y.squaredNorm();
  if (sx == 0.0 || sy == 0.0) {
    throw ConstantSeries("pearson: a series is constant");
  }

  CorrelationResult out;
  out.n = n;
  out.rho = x.dot(y) / std::sqrt(sx * sy);
  if (out.rho >= 1.0 || out.rho <= -1.0) {
    out.p_value = 0.0;
    return out;
  }
  const double dof = (double)(n - 2);
  const double t = out.rho * std::sqrt(dof / (1.0 - out.rho * out.rho));
  out.p_value = 2.0 * dist_sf(Dist::student_t, std::abs(t), dof);
  return out;
}

}  // namespace cfvc
