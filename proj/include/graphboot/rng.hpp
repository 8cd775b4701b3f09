#pragma once

#include <cstdint>
#include <random>

namespace graphboot {

using Seed = std::uint64_t;

// Purpose tags for derived random streams. Values are part of the
// reproducibility contract: changing one changes every derived seed.
enum class StreamTag : std::uint64_t {
  graph_sampling = 0x01,
  bootstrap_replicate = 0x02,
  histogram_restart = 0x03,
  monte_carlo = 0x04,
  truth_sample = 0x05,
  experiment_cell = 0x06,
  data_graph = 0x07,
};

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` for purpose `tag` under `master`.
constexpr Seed derive_seed(Seed master, StreamTag tag, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ static_cast<std::uint64_t>(tag)) ^ index);
}

/// Portable generator: mt19937_64 output sequences are fixed by the
/// standard, and every conversion below is done by hand rather than through
/// the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphboot
