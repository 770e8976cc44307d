// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/nn/loss.hpp"

#include "gesturegen/errors.hpp"

namespace gesturegen::nn {

std::pair<double, Eigen::MatrixXd> mse_loss(const Eigen::MatrixXd& pred,
                                            const Eigen::MatrixXd& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw DataError("mse_loss shape mismatch: " + std::to_string(pred.rows()) + "x" +
                    std::to_string(pred.cols()) + " vs " + std::to_string(target.rows()) + "x" +
                    std::to_string(target.cols()));
  double count = static_cast<double>(pred.size());
  if (count == 0.0) throw DataError("mse_loss on empty matrices");
  Eigen::MatrixXd diff = pred - target;
  double loss = diff.array().square().sum() / count;
  return {loss, (2.0 / count) * diff};
}

}  // namespace gesturegen::nn
