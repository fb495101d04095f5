#pragma once

#include <cstdint>

namespace warpcone {

// Counter-based generator (splitmix64 of seed xor counter). Stateless per
// draw, so parallel consumers stay reproducible and identical seeds give
// identical streams on every platform; no standard-library distributions,
// whose outputs are implementation-defined.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(splitmix64(seed ^ (0xa0761d6478bd642fULL * (stream + 1)))) {}

  std::uint64_t next_u64() { return splitmix64(seed_ ^ counter_++); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Uniform in [-1, 1].
  double next_signed() { return 2.0 * next_double() - 1.0; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace warpcone
