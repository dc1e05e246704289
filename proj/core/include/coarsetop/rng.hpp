#pragma once

#include <cstdint>
#include <limits>

namespace coarsetop {

// SplitMix64. Every random choice in the library and the CLI flows from one
// 64-bit seed through this generator, so reports are reproducible.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  constexpr std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

  // Uniform in [0, n). Slight modulo bias is irrelevant at the sizes used here.
  constexpr std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : (*this)() % n; }

  // Independent stream for the i-th task, so results do not depend on thread count.
  constexpr SplitMix64 fork(std::uint64_t i) const {
    SplitMix64 g(state_ ^ (0xd1b54a32d192ed03ULL * (i + 1)));
    g();
    return g;
  }

 private:
  std::uint64_t state_;
};

// Stateless hash of a value sequence, used for pseudo-random cochains.
constexpr std::uint64_t mix64(std::uint64_t h, std::uint64_t v) {
  SplitMix64 g(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  return g();
}

}  // namespace coarsetop
