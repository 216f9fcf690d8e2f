#pragma once

#include <cstdint>
#include <random>

namespace cfvc {

/// Deterministic normal generator: mt19937_64 driving a Box-Muller
/// transform.  Both the engine and the transform are fixed by this
/// library, so identical seeds give identical streams on every platform
/// (std::normal_distribution is implementation-defined and never used).
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw in (0, 1]; never returns 0 so log() below is safe.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal();

  /// Uniform integer in [0, bound) by modulo reduction.  The bias is
  /// immaterial for bound values many orders of magnitude below 2^64.
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent child seed from (seed, stream) via splitmix64,
/// so parallel or per-replicate streams never overlap by construction.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cfvc
