// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/nn/adam.hpp"

#include <cmath>

#include "gesturegen/errors.hpp"

namespace gesturegen::nn {

void adam_step(const std::vector<ParamTensor*>& params, AdamState& state) {
  if (state.m.empty()) {
    for (const ParamTensor* p : params) {
      state.m.push_back(Eigen::MatrixXd::Zero(p->values.rows(), p->values.cols()));
      state.v.push_back(Eigen::MatrixXd::Zero(p->values.rows(), p->values.cols()));
    }
  }
  if (state.m.size() != params.size())
    throw ConfigError("adam state tracks " + std::to_string(state.m.size()) +
                      " tensors, got " + std::to_string(params.size()));

  ++state.t;
  double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

  for (std::size_t i = 0; i < params.size(); ++i) {
    ParamTensor& p = *params[i];
    if (p.values.rows() != state.m[i].rows() || p.values.cols() != state.m[i].cols())
      throw ConfigError("adam moment shape mismatch for '" + p.name + "'");
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * p.grad;
    state.v[i] = state.beta2 * state.v[i].array().matrix() +
                 (1.0 - state.beta2) * p.grad.array().square().matrix();
    Eigen::ArrayXXd m_hat = state.m[i].array() / c1;
    Eigen::ArrayXXd v_hat = state.v[i].array() / c2;
    p.values.array() -= state.lr * m_hat / (v_hat.sqrt() + state.eps);
    if (!p.values.allFinite())
      throw NumericalError("parameter '" + p.name + "' became non-finite");
  }
}

}  // namespace gesturegen::nn
