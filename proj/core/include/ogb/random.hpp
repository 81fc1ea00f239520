#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace ogb {

/// SplitMix64 finalizer. Used for seeding and for counter-based draws.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Order-sensitive mix of a seed with two keys.
std::uint64_t mix_keys(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
inline double to_unit_double(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1p-53;
}

/// Seedable, splittable generator.
///
/// The engine is std::mt19937_64 seeded with splitmix64(seed); the uniform,
/// normal (Box-Muller) and integer transforms are implemented here rather than
/// taken from <random> distributions, so traces are identical across standard
/// libraries. split(k) derives an independent child stream from (seed, k).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const noexcept { return seed_; }
  Rng split(std::uint64_t stream) const;

  double uniform() { return to_unit_double(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ogb
