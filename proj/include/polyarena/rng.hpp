#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace polyarena {

/// Seeded generator with platform-independent draws. Copying a generator
/// copies its position in the stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Independent stream derived from (seed, name): adding a consumer of one
  /// stream never shifts the draws of another.
  static Rng stream(std::uint64_t seed, std::string_view name);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Index drawn proportionally to nonnegative weights.
  std::size_t weighted(std::span<const double> weights);

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a, used for stream derivation and content hashes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace polyarena
