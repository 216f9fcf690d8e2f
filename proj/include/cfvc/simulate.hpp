#pragma once

#include <cstdint>
#include <vector>

#include "cfvc/rng.hpp"
#include "cfvc/time_series.hpp"

namespace cfvc {

enum class DgpKind {
  white_noise,
  ar,
  random_walk,
  var,
  cointegrated_pair,
  causal_pair,
};

/// Data-generating process description.  Use the factory functions; the
/// flat struct keeps every process serializable and comparable in tests.
struct Dgp {
  DgpKind kind = DgpKind::white_noise;
  int n = 0;
  std::uint64_t seed = 0;
  double noise_scale = 1.0;

  std::vector<double> ar_coeffs;        // ar only
  std::vector<Matrix> var_lag_coeffs;   // var only, each k x k
  double gap_scale = 0.25;              // cointegrated_pair only

  static Dgp white_noise(int n, std::uint64_t seed, double scale = 1.0);
  static Dgp ar(std::vector<double> coeffs, int n, std::uint64_t seed,
                double scale = 1.0);
  static Dgp random_walk(int n, std::uint64_t seed, double scale = 1.0);
  static Dgp var(std::vector<Matrix> lag_coeffs, int n, std::uint64_t seed,
                 double scale = 1.0);
  static Dgp cointegrated_pair(int n, std::uint64_t seed,
                               double gap_scale = 0.25);
  static Dgp causal_pair(int n, std::uint64_t seed);
};

/// Draws the process.  Stationary kinds (white_noise, ar, var, causal_pair)
/// discard a 100-observation burn-in; integrated kinds start at zero.
/// Throws UnstableParameters when an ar/var root is on or outside the unit
/// circle, SeriesTooShort when n < 10.
std::vector<TimeSeries> generate(const Dgp& dgp);

}  // namespace cfvc
