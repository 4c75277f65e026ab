#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dantzig {

/// Recorded verbatim in every output file so runs can be matched to the generator.
inline constexpr std::string_view kRngName = "mt19937_64+splitmix64-substreams";

/// Purposes for which independent sub-streams are split off one trial seed.
enum class Stream : std::uint64_t {
  Sensing = 1,
  Signal = 2,
  Noise = 3,
  Selection = 4,
  Dataset = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic sub-seed for (base seed, trial index, purpose).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, Stream purpose);

/// Portable random source. The engine is std::mt19937_64, whose output sequence is
/// fixed by the standard; the distributions below are implemented here because the
/// standard library ones are not reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool coin() { return (engine_() >> 63) != 0; }

  /// `count` distinct indices drawn uniformly from {0, ..., population - 1}, in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dantzig
