// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gesturegen/dataset/standardizer.hpp"
#include "gesturegen/errors.hpp"
#include "helpers.hpp"

using namespace gesturegen;

TEST_CASE("standardizer closed form on a ramp column") {
  Eigen::MatrixXd x(3, 1);
  x << 2, 4, 6;
  NormalizationStats s = fit_standardizer(x);
  CHECK(s.mean(0) == 4.0);
  CHECK(s.scale(0) == 2.0);

  Eigen::MatrixXd z = apply_standardizer(s, x);
  CHECK(z(0, 0) == -1.0);
  CHECK(z(1, 0) == 0.0);
  CHECK(z(2, 0) == 1.0);
}

TEST_CASE("constant columns are flagged degenerate with scale 1") {
  Eigen::MatrixXd x(4, 2);
  x.col(0) << 1, 2, 3, 4;
  x.col(1).setConstant(7.0);
  NormalizationStats s = fit_standardizer(x);
  CHECK(s.scale(1) == 1.0);
  REQUIRE(s.degenerate_dims.size() == 1);
  CHECK(s.degenerate_dims[0] == 1);

  Eigen::MatrixXd z = apply_standardizer(s, x);
  CHECK(z.col(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("standardized training data is centered with max abs one") {
  gesturegen::nn::Rng rng(5);
  Eigen::MatrixXd x = testutil::random_matrix(200, 6, rng, 3.0);
  x.rowwise() += Eigen::RowVectorXd::Constant(6, 11.0);

  NormalizationStats s = fit_standardizer(x);
  Eigen::MatrixXd z = apply_standardizer(s, x);
  CHECK(z.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
  for (int c = 0; c < 6; ++c)
    CHECK(z.col(c).cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invert undoes apply") {
  gesturegen::nn::Rng rng(6);
  Eigen::MatrixXd x = testutil::random_matrix(50, 4, rng, 2.0);
  NormalizationStats s = fit_standardizer(x);
  Eigen::MatrixXd back = invert_standardizer(s, apply_standardizer(s, x));
  CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dimension mismatches are rejected") {
  Eigen::MatrixXd x(3, 2);
  x.setRandom();
  NormalizationStats s = fit_standardizer(x);
  Eigen::MatrixXd wrong(3, 3);
  wrong.setRandom();
  CHECK_THROWS_AS(apply_standardizer(s, wrong), DataError);
  CHECK_THROWS_AS(invert_standardizer(s, wrong), DataError);
}

TEST_CASE("slice_stats keeps the addressed dims") {
  Eigen::MatrixXd x(4, 6);
  x.setRandom();
  NormalizationStats s =
      fit_standardizer(x, {"a", "b", "c", "d", "e", "f"});
  NormalizationStats mid = slice_stats(s, 2, 3);
  REQUIRE(mid.dim() == 3);
  CHECK(mid.mean(0) == s.mean(2));
  CHECK(mid.scale(2) == s.scale(4));
  REQUIRE(mid.labels.size() == 3);
  CHECK(mid.labels[0] == "c");
  CHECK_THROWS_AS(slice_stats(s, 4, 3), DataError);
}

TEST_CASE("stats json round trip is exact") {
  gesturegen::nn::Rng rng(7);
  Eigen::MatrixXd x = testutil::random_matrix(30, 3, rng);
  x.col(2).setConstant(0.5);
  NormalizationStats s = fit_standardizer(x, {"p", "q", "r"});
  NormalizationStats back = stats_from_json(stats_to_json(s));
  CHECK((back.mean - s.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.scale - s.scale).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.degenerate_dims == s.degenerate_dims);
  CHECK(back.labels == s.labels);
}
