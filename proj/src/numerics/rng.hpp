#pragma once

#include <cstdint>
#include <random>

namespace qrem::numerics {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for substream `stream` of root seed `root`.
///
/// Stream splitting rule: the root seed and the stream index are mixed by two
/// SplitMix64 rounds, state = root ^ (stream * 0xD1B54A32D192ED03). Substream
/// i of a run is therefore a pure function of (root, i) and does not depend on
/// how work is distributed across threads.
inline std::uint64_t derive_stream_seed(std::uint64_t root, std::uint64_t stream) noexcept {
  std::uint64_t state = root ^ (stream * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return splitmix64(state);
}

/// Seedable uniform source. One 64-bit draw per uniform().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t root, std::uint64_t stream) : engine_(derive_stream_seed(root, stream)) {}

  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qrem::numerics
