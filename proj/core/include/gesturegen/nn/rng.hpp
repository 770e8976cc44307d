// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gesturegen::nn {

/// Deterministic random source. All draws go through fixed arithmetic on
/// mt19937_64 output so streams are reproducible across platforms; the
/// distribution classes from <random> are implementation-defined and
/// deliberately not used.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  void reseed(uint64_t seed) {
    engine_.seed(seed);
    spare_valid_ = false;
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian();

  /// Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool spare_valid_ = false;
  double spare_ = 0.0;
};

}  // namespace gesturegen::nn
