// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>

namespace gesturegen::nn {

/// Mean over all elements of the squared difference, plus its gradient with
/// respect to pred: 2 * (pred - target) / count.
std::pair<double, Eigen::MatrixXd> mse_loss(const Eigen::MatrixXd& pred,
                                            const Eigen::MatrixXd& target);

}  // namespace gesturegen::nn
