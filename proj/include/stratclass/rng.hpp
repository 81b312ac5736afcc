#pragma once

#include <cstdint>
#include <random>

namespace stratclass {

/// Seedable generator with a platform-independent output sequence.
///
/// Engine: std::mt19937_64 (its output is fixed by the C++ standard).
/// uniform(): top 53 bits of one engine draw scaled to [0,1).
/// normal(): Marsaglia polar method on uniform(), caching the second variate.
/// uniform_index(n): rejection on 64-bit draws, no modulo bias.
/// The standard library distributions are avoided because their algorithms
/// differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stratclass
