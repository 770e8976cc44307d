// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/nn/rng.hpp"

#include <cmath>

namespace gesturegen::nn {

double Rng::gaussian() {
  if (spare_valid_) {
    spare_valid_ = false;
    return spare_;
  }
  double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  double u2 = uniform();
  double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  spare_valid_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

uint64_t Rng::uniform_int(uint64_t n) {
  if (n == 0) return 0;
  // Rejection sampling keeps the draw unbiased and the stream deterministic.
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace gesturegen::nn
