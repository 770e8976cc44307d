// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gesturegen/nn/network.hpp"

namespace gesturegen::nn {

/// Central finite differences of the MSE loss against the analytic gradients,
/// over every trainable parameter entry. Returns the maximum relative error
/// |a - n| / max(|a|, |n|, 1e-8). The network RNG is re-seeded before every
/// forward so dropout masks stay fixed across evaluations.
double gradient_check(Network& net, const SeqBatch& input, const Eigen::MatrixXd& target,
                      double step = 1e-5);

}  // namespace gesturegen::nn
