// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gesturegen/errors.hpp"
#include "gesturegen/nn/adam.hpp"
#include "gesturegen/nn/rng.hpp"
#include "helpers.hpp"

using namespace gesturegen::nn;

namespace {

/// Textbook scalar Adam, written independently of the library version.
struct ScalarAdam {
  double lr, b1, b2, eps;
  double m = 0.0, v = 0.0;
  long t = 0;

  double step(double theta, double g) {
    ++t;
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    double mh = m / (1.0 - std::pow(b1, static_cast<double>(t)));
    double vh = v / (1.0 - std::pow(b2, static_cast<double>(t)));
    return theta - lr * mh / (std::sqrt(vh) + eps);
  }
};

ParamTensor scalar_param(double value) {
  ParamTensor p;
  p.name = "w";
  p.values = Eigen::MatrixXd::Constant(1, 1, value);
  p.grad = Eigen::MatrixXd::Zero(1, 1);
  return p;
}

}  // namespace

TEST_CASE("zero gradient leaves parameters untouched") {
  Rng rng(1);
  ParamTensor p;
  p.name = "w";
  p.values = testutil::random_matrix(3, 3, rng);
  p.grad = Eigen::MatrixXd::Zero(3, 3);
  Eigen::MatrixXd before = p.values;

  AdamState state;
  adam_step({&p}, state);
  CHECK((p.values - before).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("first step moves by about lr against the gradient sign") {
  for (double g : {3.0, -0.25}) {
    ParamTensor p = scalar_param(1.0);
    p.grad(0, 0) = g;
    AdamState state;
    state.lr = 0.01;
    adam_step({&p}, state);
    double delta = p.values(0, 0) - 1.0;
    CHECK(std::abs(delta + state.lr * (g > 0 ? 1.0 : -1.0)) < state.lr * 1e-4);
  }

  // Near-zero gradients shrink toward eps territory: the bias-corrected ratio
  // |g| / (|g| + eps) dips below one but the step can never exceed lr.
  ParamTensor p = scalar_param(1.0);
  p.grad(0, 0) = 1e-6;
  AdamState state;
  state.lr = 0.01;
  adam_step({&p}, state);
  double delta = p.values(0, 0) - 1.0;
  CHECK(delta < 0.0);
  CHECK(std::abs(delta) <= state.lr);
  CHECK(std::abs(delta) > 0.9 * state.lr);
}

TEST_CASE("adam drives a quadratic toward its minimum") {
  ParamTensor p = scalar_param(1.0);
  AdamState state;
  state.lr = 0.1;
  for (int i = 0; i < 200; ++i) {
    p.grad(0, 0) = 2.0 * p.values(0, 0);  // d/dx of x^2
    adam_step({&p}, state);
  }
  CHECK(std::abs(p.values(0, 0)) < 0.05);
}

TEST_CASE("adam trajectory matches the scalar reference") {
  ParamTensor p = scalar_param(0.7);
  AdamState state;
  state.lr = 0.003;
  ScalarAdam ref{state.lr, state.beta1, state.beta2, state.eps};

  Rng rng(5);
  double theta = 0.7;
  for (int i = 0; i < 50; ++i) {
    double g = rng.gaussian();
    p.grad(0, 0) = g;
    adam_step({&p}, state);
    theta = ref.step(theta, g);
    CHECK(p.values(0, 0) == doctest::Approx(theta).epsilon(1e-12));
  }
}

TEST_CASE("adam state is tied to the parameter list shape") {
  ParamTensor a = scalar_param(0.0), b = scalar_param(0.0);
  AdamState state;
  adam_step({&a}, state);
  CHECK_THROWS_AS(adam_step({&a, &b}, state), gesturegen::ConfigError);
}

TEST_CASE("non-finite updates raise a numerical error") {
  ParamTensor p = scalar_param(1.0);
  p.grad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  AdamState state;
  CHECK_THROWS_AS(adam_step({&p}, state), gesturegen::NumericalError);
}
