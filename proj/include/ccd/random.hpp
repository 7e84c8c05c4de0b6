#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace ccd {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream keyed by (seed, key...). The n-th draw depends only on
// the key and n, so work items can be evaluated in any order.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) : state_(splitmix64(seed)) {
    for (std::uint64_t k : key) state_ = splitmix64(state_ ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t next_u64() { return splitmix64(state_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do v = next_u64();
    while (v >= limit);
    return v % n;
  }

  // Standard normal by Box-Muller; one value per call.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
};

}  // namespace ccd
