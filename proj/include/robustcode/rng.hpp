#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Reproducible randomness. All draws go through mt19937_64 (whose output
// sequence is pinned by the standard) and the inverse-CDF normal transform,
// so a seed determines every stream bit-for-bit.

namespace robustcode {

/// splitmix64-style mix of two seeds into one.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// uniform on the open interval (0,1)
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  /// standard normal via inverse CDF
  double normal();

  /// unbiased index in [0, n)
  std::size_t index(std::size_t n);

  /// uniformly random k-subset of {0..n-1}, returned sorted ascending
  std::vector<std::size_t> subset(std::size_t n, std::size_t k);

  void fill_normal(double* out, std::size_t n, double sigma = 1.0);

 private:
  std::mt19937_64 engine_;
};

}  // namespace robustcode
