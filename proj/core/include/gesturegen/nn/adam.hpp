// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gesturegen/nn/layers.hpp"

namespace gesturegen::nn {

/// Adam optimizer state. Moment buffers are allocated lazily on the first
/// step so the state can outlive network reconstruction as long as the
/// parameter list keeps its order and shapes.
struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
  std::vector<Eigen::MatrixXd> m, v;
};

/// One bias-corrected Adam update over the given parameters (their grads must
/// already be accumulated). Throws NumericalError if any parameter leaves the
/// finite range.
void adam_step(const std::vector<ParamTensor*>& params, AdamState& state);

}  // namespace gesturegen::nn
