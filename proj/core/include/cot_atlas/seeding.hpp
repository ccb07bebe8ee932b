#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace cot_atlas {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t p : parts) h = splitmix64(h ^ p);
  return h;
}

inline std::uint64_t seed_part(double value) { return std::bit_cast<std::uint64_t>(value); }

// Portable stream of doubles in [0, 1); the standard distributions are not
// reproducible across library implementations.
class SplitMixStream {
 public:
  explicit SplitMixStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state_);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double symmetric(double half_width) { return (2.0 * uniform() - 1.0) * half_width; }

 private:
  std::uint64_t state_;
};

}  // namespace cot_atlas
