// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gesturegen/nn/loss.hpp"
#include "gesturegen/nn/rng.hpp"
#include "helpers.hpp"

using namespace gesturegen::nn;

TEST_CASE("mse is zero at the target") {
  Rng rng(1);
  Eigen::MatrixXd t = testutil::random_matrix(4, 3, rng);
  auto [loss, grad] = mse_loss(t, t);
  CHECK(loss == 0.0);
  CHECK(grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant offset of 2 gives loss 4") {
  Eigen::MatrixXd pred = Eigen::MatrixXd::Constant(5, 2, 3.0);
  Eigen::MatrixXd target = Eigen::MatrixXd::Constant(5, 2, 1.0);
  auto [loss, grad] = mse_loss(pred, target);
  CHECK(loss == doctest::Approx(4.0));
  CHECK(grad.isApproxToConstant(2.0 * 2.0 / 10.0));
}

TEST_CASE("mse gradient matches finite differences") {
  Rng rng(2);
  Eigen::MatrixXd pred = testutil::random_matrix(3, 4, rng);
  Eigen::MatrixXd target = testutil::random_matrix(3, 4, rng);
  auto [loss, grad] = mse_loss(pred, target);

  double h = 1e-6;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      Eigen::MatrixXd up = pred, dn = pred;
      up(r, c) += h;
      dn(r, c) -= h;
      double numeric = (mse_loss(up, target).first - mse_loss(dn, target).first) / (2.0 * h);
      CHECK(grad(r, c) == doctest::Approx(numeric).epsilon(1e-6));
    }
  }
}

TEST_CASE("mse rejects shape mismatches") {
  Eigen::MatrixXd a(2, 2), b(2, 3);
  a.setZero();
  b.setZero();
  CHECK_THROWS(mse_loss(a, b));
}
