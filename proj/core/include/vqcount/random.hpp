#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace vqcount {

/// SplitMix64 finalizer. Used for seed derivation only.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `stream` of `parent`. All randomness in the project
/// descends from one user seed through this function, so any sub-run can be
/// replayed without regenerating its siblings.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  return splitmix64(parent ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Well-known stream ids for derive_seed.
namespace streams {
inline constexpr std::uint64_t kInstance = 1;
inline constexpr std::uint64_t kRun = 2;
inline constexpr std::uint64_t kShots = 3;
inline constexpr std::uint64_t kOptimizer = 4;
inline constexpr std::uint64_t kBaseline = 5;
}  // namespace streams

/// Platform-stable random source. std::mt19937_64 has a fixed output
/// sequence; the distribution helpers below avoid the implementation-defined
/// std::*_distribution types so that instances are byte-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Number of Bernoulli(p) trials up to and including the first success.
  std::uint64_t geometric(double p);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vqcount
