// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gesturegen/errors.hpp"
#include "gesturegen/models/windows.hpp"
#include "helpers.hpp"

using namespace gesturegen;

TEST_CASE("pose_velocity_frames stacks positions and backward differences") {
  Eigen::MatrixXd pos(3, 2);
  pos << 1, 10, 2, 12, 4, 15;
  Eigen::MatrixXd pv = pose_velocity_frames(pos);
  REQUIRE(pv.rows() == 3);
  REQUIRE(pv.cols() == 4);
  CHECK((pv.leftCols(2) - pos).norm() == 0.0);
  CHECK(pv(0, 2) == 0.0);  // delta g_0 = 0
  CHECK(pv(0, 3) == 0.0);
  CHECK(pv(1, 2) == 1.0);
  CHECK(pv(2, 3) == 3.0);
}

TEST_CASE("constant motion has zero velocity half") {
  Eigen::MatrixXd pos = Eigen::MatrixXd::Constant(10, 6, 2.5);
  Eigen::MatrixXd pv = pose_velocity_frames(pos);
  CHECK(pv.rightCols(6).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feature_window replicates edges") {
  Eigen::MatrixXd f(4, 1);
  f << 0, 1, 2, 3;

  Eigen::MatrixXd w = feature_window(f, 2, 0);
  REQUIRE(w.rows() == 5);
  CHECK(w(0, 0) == 0.0);  // t-2 clamps to frame 0
  CHECK(w(1, 0) == 0.0);
  CHECK(w(2, 0) == 0.0);
  CHECK(w(3, 0) == 1.0);
  CHECK(w(4, 0) == 2.0);

  Eigen::MatrixXd end = feature_window(f, 2, 3);
  CHECK(end(2, 0) == 3.0);
  CHECK(end(3, 0) == 3.0);  // t+1 clamps to the last frame
  CHECK(end(4, 0) == 3.0);
}

TEST_CASE("a length-one sequence yields a fully replicated window") {
  Eigen::MatrixXd f(1, 3);
  f << 4, 5, 6;
  Eigen::MatrixXd w = feature_window(f, 30, 0);
  REQUIRE(w.rows() == 61);
  for (int r = 0; r < 61; ++r) CHECK((w.row(r) - f.row(0)).norm() == 0.0);
}

TEST_CASE("build_windows makes one example per frame") {
  FeatureSequence feats;
  feats.fps = 20;
  feats.data = Eigen::MatrixXd::Random(100, 4);
  MotionSequence motion = testutil::random_motion(100, 2, 3);

  auto examples = build_windows(feats, motion, 30);
  REQUIRE(examples.size() == 100);
  CHECK(examples[0].input.rows() == 61);
  CHECK(examples[0].input.cols() == 4);
  CHECK(examples[0].target.size() == 12);  // 2 joints * 3 coords * 2 (velocity)

  auto plain = build_windows(feats, motion, 30, false);
  CHECK(plain[0].target.size() == 6);
}

TEST_CASE("build_windows truncates to the shorter sequence") {
  FeatureSequence feats;
  feats.fps = 20;
  feats.data = Eigen::MatrixXd::Random(80, 4);
  MotionSequence motion = testutil::random_motion(100, 2, 4);
  CHECK(build_windows(feats, motion, 5).size() == 80);
}

TEST_CASE("build_windows insists on matching rates") {
  FeatureSequence feats;
  feats.fps = 100;
  feats.data = Eigen::MatrixXd::Random(50, 4);
  MotionSequence motion = testutil::random_motion(50, 2, 5);
  CHECK_THROWS_AS(build_windows(feats, motion, 5), DataError);
}

TEST_CASE("chunk_ranges policy") {
  auto two = chunk_ranges(250, 100);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == std::pair<int, int>(0, 100));
  CHECK(two[1] == std::pair<int, int>(100, 200));

  CHECK(chunk_ranges(99, 100).empty());
  CHECK(chunk_ranges(100, 100).size() == 1);
}
