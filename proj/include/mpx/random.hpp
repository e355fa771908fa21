#pragma once

// Seed derivation and variate generation with a bit-stable definition on every
// platform (std::*_distribution output is implementation-defined).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mpx {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Direction : std::uint8_t { forward = 0, backward = 1 };

/// Identifies one independent random stream derived from a master seed.
/// `lane` separates auxiliary streams of the same replica (e.g. the forward
/// stream used for the coboundary sample next to a backward coupling).
struct StreamKey {
  std::uint64_t replica = 0;
  Direction direction = Direction::forward;
  std::uint64_t lane = 0;
};

inline std::uint64_t derive_seed(std::uint64_t master, const StreamKey& key) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ key.replica);
  h = splitmix64(h ^ static_cast<std::uint64_t>(key.direction));
  h = splitmix64(h ^ key.lane);
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Box-Muller; the second variate of each pair is cached.
  double normal(double mu = 0.0, double s = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mu + s * spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return mu + s * r * std::cos(t);
  }

  /// Index drawn from a discrete law given by cumulative weights (last == 1).
  template <typename Cdf>
  std::size_t categorical(const Cdf& cumulative) {
    const double u = uniform01();
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    return k;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mpx
