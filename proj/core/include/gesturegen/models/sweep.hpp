// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gesturegen/models/training.hpp"

namespace gesturegen {

struct SweepRow {
  int dim = 0;
  double dae_val_mse = 0.0;
  double val_ape = 0.0;    // mean over val pairs, cm
  double mean_jerk = 0.0;  // mean over val pairs, cm/s^3
};

/// Trains a full aud2repr2pose system per bottleneck dim (shared seed, same
/// data) and evaluates each on the val split. One row per dim, in order.
std::vector<SweepRow> sweep_bottleneck(const std::vector<LoadedPair>& train,
                                       const std::vector<LoadedPair>& val,
                                       const ModelConfig& base, const std::vector<int>& dims);

}  // namespace gesturegen
