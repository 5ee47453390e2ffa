#pragma once

#include <cstdint>
#include <random>

namespace stochmatch {

/// (seed, stream) fully determines a sample sequence.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child stream `index` of this one. Distinct (parent, index) pairs give
  /// distinct children; used for per-round and per-trial streams.
  RngSeed split(std::uint64_t index) const noexcept;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// mt19937_64 seeded through seed_seq from the four 32-bit halves of
/// (seed, stream).
class Rng {
 public:
  explicit Rng(RngSeed s);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stochmatch
