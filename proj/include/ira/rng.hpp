#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace ira::rng {

/// SplitMix64 finalizer (Steele, Lea & Flood); a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Domain tags keep substreams of different subsystems apart for the same seed.
enum class Domain : std::uint64_t {
  background = 0x6261636b67726e64ULL,
  forest = 0x666f72657374ULL,
  synth = 0x73796e7468ULL,
};

/// Counter-based stream: the i-th draw is a pure function of (key, i), so a
/// substream yields the same numbers no matter which thread consumes it or when.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  /// Substream keyed by (seed, domain, ids...). Distinct id tuples give
  /// statistically independent streams.
  static Stream derive(std::uint64_t seed, Domain domain,
                       std::initializer_list<std::uint64_t> ids) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n) by multiply-shift with rejection (Lemire). n >= 1.
  std::uint64_t index(std::uint64_t n) noexcept;

  /// Standard normal via the Box-Muller transform; the second variate of each
  /// pair is cached and returned by the next call.
  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace ira::rng
