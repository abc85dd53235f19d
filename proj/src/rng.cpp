#include "ira/rng.hpp"

#include <cmath>
#include <numbers>

namespace ira::rng {

Stream Stream::derive(std::uint64_t seed, Domain domain,
                      std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t key = mix64(seed ^ mix64(static_cast<std::uint64_t>(domain)));
  std::uint64_t slot = 1;
  for (const auto id : ids) {
    key = mix64(key + mix64(id + slot * 0x9E3779B97F4A7C15ULL));
    ++slot;
  }
  return Stream(key);
}

__extension__ using Wide = unsigned __int128;

std::uint64_t Stream::index(std::uint64_t n) noexcept {
  Wide m = static_cast<Wide>((*this)()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<Wide>((*this)()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Stream::normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // 1 - u lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

}  // namespace ira::rng
