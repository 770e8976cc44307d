// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/nn/gradient_check.hpp"

#include <cmath>

#include "gesturegen/nn/loss.hpp"

namespace gesturegen::nn {

double gradient_check(Network& net, const SeqBatch& input, const Eigen::MatrixXd& target,
                      double step) {
  Mode saved_mode = net.mode();
  uint64_t seed = net.seed();
  net.set_mode(Mode::Train);

  auto loss_at = [&] {
    net.reseed(seed);
    SeqBatch out = net.forward(input);
    return mse_loss(out.data, target).first;
  };

  net.reseed(seed);
  SeqBatch out = net.forward(input);
  auto [loss, grad] = mse_loss(out.data, target);
  (void)loss;
  net.zero_grad();
  net.backward({std::move(grad), out.time, out.batch});

  std::vector<Eigen::MatrixXd> analytic;
  std::vector<ParamTensor*> params = net.trainable_parameters();
  analytic.reserve(params.size());
  for (ParamTensor* p : params) analytic.push_back(p->grad);

  double max_rel = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Eigen::MatrixXd& values = params[i]->values;
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      for (Eigen::Index c = 0; c < values.cols(); ++c) {
        double original = values(r, c);
        values(r, c) = original + step;
        double plus = loss_at();
        values(r, c) = original - step;
        double minus = loss_at();
        values(r, c) = original;

        double numeric = (plus - minus) / (2.0 * step);
        double a = analytic[i](r, c);
        double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
      }
    }
  }

  net.reseed(seed);
  net.set_mode(saved_mode);
  return max_rel;
}

}  // namespace gesturegen::nn
