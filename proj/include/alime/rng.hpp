#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace alime {

// Deterministic random source. The std::* distributions are
// implementation-defined, so every transform is spelled out here: identical
// seeds must reproduce identical streams on any toolchain.
//
//   engine      mt19937_64 seeded directly with the given value
//   uniform01   (x >> 11) * 2^-53, uniform on [0, 1)
//   normal      Box-Muller, sqrt(-2 ln u1) * cos(2 pi u2), two draws per call
//   below(n)    rejection sampling, unbiased on [0, n)
//   shuffle     Fisher-Yates driven by below()
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    const std::uint64_t cut = (-n) % n;  // 2^64 mod n
    std::uint64_t x = engine_();
    while (x < cut) x = engine_();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace alime
