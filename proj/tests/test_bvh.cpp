// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <string>
#include <vector>

#include "gesturegen/bvh.hpp"
#include "gesturegen/errors.hpp"
#include "gesturegen/nn/rng.hpp"
#include "helpers.hpp"

using namespace gesturegen;

namespace {

const char* kChain3 = R"(HIERARCHY
ROOT hips
{
  OFFSET 0 0 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT spine
  {
    OFFSET 0 10 0
    CHANNELS 3 Zrotation Xrotation Yrotation
    JOINT head
    {
      OFFSET 0 7 0
      CHANNELS 3 Zrotation Xrotation Yrotation
      End Site
      {
        OFFSET 0 3 0
      }
    }
  }
}
MOTION
Frames: 2
Frame Time: 0.05
0 0 0 0 0 0 0 0 0 0 0 0
1 2 3 10 20 30 5 -5 15 0 45 0
)";

// Mixed channel orders and a branch, for the random-pose oracle test.
const char* kBranchy = R"(HIERARCHY
ROOT root
{
  OFFSET 0 0 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Yrotation Xrotation
  JOINT a
  {
    OFFSET 2 0 0
    CHANNELS 3 Xrotation Yrotation Zrotation
    JOINT b
    {
      OFFSET 0 3 1
      CHANNELS 3 Yrotation Zrotation Xrotation
      End Site
      {
        OFFSET 0 1 0
      }
    }
  }
  JOINT c
  {
    OFFSET -2 1 0
    CHANNELS 3 Zrotation Xrotation Yrotation
    End Site
    {
      OFFSET 0 0 2
    }
  }
}
MOTION
Frames: 1
Frame Time: 0.05
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
)";

/// Independent FK reference built on 4x4 homogeneous matrices and
/// Eigen::AngleAxisd, sharing no code with the library implementation.
std::vector<Eigen::Vector3d> fk_oracle(const Skeleton& sk,
                                       const std::vector<int>& channel_offset,
                                       const Eigen::RowVectorXd& frame) {
  std::vector<Eigen::Matrix4d> global(sk.joints.size());
  std::vector<Eigen::Vector3d> out(sk.joints.size());
  for (std::size_t j = 0; j < sk.joints.size(); ++j) {
    const Joint& joint = sk.joints[j];
    Eigen::Vector3d t = joint.offset;
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    int ch = channel_offset[j];
    for (Channel c : joint.channels) {
      double v = frame(ch++);
      double rad = v * M_PI / 180.0;
      switch (c) {
        case Channel::Xposition: t.x() += v; break;
        case Channel::Yposition: t.y() += v; break;
        case Channel::Zposition: t.z() += v; break;
        case Channel::Xrotation:
          r = r * Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitX()).toRotationMatrix();
          break;
        case Channel::Yrotation:
          r = r * Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitY()).toRotationMatrix();
          break;
        case Channel::Zrotation:
          r = r * Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitZ()).toRotationMatrix();
          break;
      }
    }
    Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
    local.block<3, 3>(0, 0) = r;
    local.block<3, 1>(0, 3) = t;
    global[j] = joint.parent < 0 ? local : global[joint.parent] * local;
    out[j] = global[j].block<3, 1>(0, 3);
  }
  return out;
}

}  // namespace

TEST_CASE("bvh parses a degenerate single-joint file") {
  std::string text =
      "HIERARCHY\nROOT only\n{\n  OFFSET 1 2 3\n"
      "  CHANNELS 3 Xposition Yposition Zposition\n"
      "  End Site\n  {\n    OFFSET 0 1 0\n  }\n}\n"
      "MOTION\nFrames: 2\nFrame Time: 0.05\n0 0 0\n4 5 6\n";
  BvhData bvh = parse_bvh_string(text);
  REQUIRE(bvh.skeleton.joint_count() == 1);
  CHECK(bvh.skeleton.joints[0].parent == -1);
  CHECK(bvh.skeleton.joints[0].has_end_site);
  CHECK(bvh.frames.rows() == 2);
  CHECK(bvh.frames.cols() == 3);
  CHECK(bvh.frames(1, 2) == 6.0);
}

TEST_CASE("bvh frame count mismatch is a parse error") {
  std::string text =
      "HIERARCHY\nROOT r\n{\n  OFFSET 0 0 0\n  CHANNELS 3 Xposition Yposition Zposition\n}\n"
      "MOTION\nFrames: 10\nFrame Time: 0.05\n0 0 0\n1 1 1\n";
  CHECK_THROWS_AS(parse_bvh_string(text), ParseError);

  std::string extra =
      "HIERARCHY\nROOT r\n{\n  OFFSET 0 0 0\n  CHANNELS 3 Xposition Yposition Zposition\n}\n"
      "MOTION\nFrames: 1\nFrame Time: 0.05\n0 0 0\n1 1 1\n";
  CHECK_THROWS_AS(parse_bvh_string(extra), ParseError);
}

TEST_CASE("bvh three-joint chain parses parents and channel order") {
  BvhData bvh = parse_bvh_string(kChain3);
  const Skeleton& sk = bvh.skeleton;
  REQUIRE(sk.joint_count() == 3);
  CHECK(sk.joints[0].parent == -1);
  CHECK(sk.joints[1].parent == 0);
  CHECK(sk.joints[2].parent == 1);
  CHECK(sk.joints[1].name == "spine");
  CHECK(sk.find_joint("head") == 2);
  CHECK(sk.find_joint("nope") == -1);
  REQUIRE(sk.joints[1].channels.size() == 3);
  CHECK(sk.joints[1].channels[0] == Channel::Zrotation);
  CHECK(sk.joints[1].channels[1] == Channel::Xrotation);
  CHECK(sk.joints[1].channels[2] == Channel::Yrotation);
  CHECK(bvh.channel_offset == std::vector<int>({0, 6, 9}));
  CHECK(bvh.fps() == 20);
}

TEST_CASE("rotation_matrix basis directions are right handed") {
  Eigen::Vector3d x(1, 0, 0), y(0, 1, 0), z(0, 0, 1);
  CHECK((rotation_matrix(Channel::Zrotation, 90.0) * x - y).norm() < 1e-12);
  CHECK((rotation_matrix(Channel::Xrotation, 90.0) * y - z).norm() < 1e-12);
  CHECK((rotation_matrix(Channel::Yrotation, 90.0) * z - x).norm() < 1e-12);

  nn::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    double deg = rng.uniform(-360.0, 360.0);
    for (Channel c : {Channel::Xrotation, Channel::Yrotation, Channel::Zrotation}) {
      Eigen::Matrix3d r = rotation_matrix(c, deg);
      CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
      CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("fk with all channels zero walks the offset chain") {
  BvhData bvh = parse_bvh_string(kChain3);
  Eigen::RowVectorXd zero = Eigen::RowVectorXd::Zero(12);
  auto pos = forward_kinematics(bvh.skeleton, bvh.channel_offset, zero);
  CHECK((pos[0] - Eigen::Vector3d(0, 0, 0)).norm() < 1e-15);
  CHECK((pos[1] - Eigen::Vector3d(0, 10, 0)).norm() < 1e-15);
  CHECK((pos[2] - Eigen::Vector3d(0, 17, 0)).norm() < 1e-15);
}

TEST_CASE("fk rotates a child around the root") {
  std::string text =
      "HIERARCHY\nROOT r\n{\n  OFFSET 0 0 0\n  CHANNELS 3 Zrotation Xrotation Yrotation\n"
      "  JOINT tip\n  {\n    OFFSET 1 0 0\n    CHANNELS 3 Zrotation Xrotation Yrotation\n"
      "  }\n}\nMOTION\nFrames: 1\nFrame Time: 0.05\n90 0 0 0 0 0\n";
  BvhData bvh = parse_bvh_string(text);
  auto pos = forward_kinematics(bvh.skeleton, bvh.channel_offset, bvh.frames.row(0));
  CHECK((pos[1] - Eigen::Vector3d(0, 1, 0)).norm() < 1e-9);
}

TEST_CASE("fk matches the homogeneous-matrix oracle on random poses") {
  BvhData bvh = parse_bvh_string(kBranchy);
  nn::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Eigen::RowVectorXd frame(15);
    for (int c = 0; c < 15; ++c)
      frame(c) = c < 3 ? rng.uniform(-20.0, 20.0) : rng.uniform(-180.0, 180.0);
    auto got = forward_kinematics(bvh.skeleton, bvh.channel_offset, frame);
    auto want = fk_oracle(bvh.skeleton, bvh.channel_offset, frame);
    REQUIRE(got.size() == want.size());
    for (std::size_t j = 0; j < got.size(); ++j) CHECK((got[j] - want[j]).norm() < 1e-9);
  }
}

TEST_CASE("fk keeps rotation-only children at their offset distance") {
  BvhData bvh = parse_bvh_string(kBranchy);
  nn::Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    Eigen::RowVectorXd frame(15);
    for (int c = 0; c < 15; ++c) frame(c) = rng.uniform(-180.0, 180.0);
    auto pos = forward_kinematics(bvh.skeleton, bvh.channel_offset, frame);
    for (int j = 1; j < bvh.skeleton.joint_count(); ++j) {
      const Joint& joint = bvh.skeleton.joints[j];
      double d = (pos[j] - pos[joint.parent]).norm();
      CHECK(d == doctest::Approx(joint.offset.norm()).epsilon(1e-9));
    }
  }
}

TEST_CASE("to_motion_sequence matches per-frame fk") {
  BvhData bvh = parse_bvh_string(kChain3);
  MotionSequence m = to_motion_sequence(bvh);
  REQUIRE(m.fps == 20);
  REQUIRE(m.joints() == 3);
  REQUIRE(m.frames() == 2);
  CHECK(m.joint_names[2] == "head");
  for (int f = 0; f < 2; ++f) {
    auto pos = forward_kinematics(bvh.skeleton, bvh.channel_offset, bvh.frames.row(f));
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(m.positions(f, 3 * j + k) == pos[j](k));
  }
}

TEST_CASE("static bvh yields identical motion rows") {
  std::string text =
      "HIERARCHY\nROOT r\n{\n  OFFSET 0 5 0\n  CHANNELS 3 Zrotation Xrotation Yrotation\n"
      "  JOINT t\n  {\n    OFFSET 2 0 0\n    CHANNELS 3 Zrotation Xrotation Yrotation\n"
      "  }\n}\nMOTION\nFrames: 2\nFrame Time: 0.05\n10 20 30 5 5 5\n10 20 30 5 5 5\n";
  MotionSequence m = to_motion_sequence(parse_bvh_string(text));
  CHECK((m.positions.row(0) - m.positions.row(1)).norm() == 0.0);
}

TEST_CASE("bvh write-then-parse round trip") {
  testutil::TempDir dir("bvh_rt");
  BvhData bvh = parse_bvh_string(kBranchy);
  nn::Rng rng(4);
  bvh.frames.resize(3, 15);
  for (int f = 0; f < 3; ++f)
    for (int c = 0; c < 15; ++c) bvh.frames(f, c) = rng.uniform(-90.0, 90.0);

  write_bvh(bvh, dir.file("x.bvh"));
  BvhData back = parse_bvh(dir.file("x.bvh"));

  REQUIRE(back.skeleton.joint_count() == bvh.skeleton.joint_count());
  for (int j = 0; j < bvh.skeleton.joint_count(); ++j) {
    CHECK(back.skeleton.joints[j].name == bvh.skeleton.joints[j].name);
    CHECK(back.skeleton.joints[j].parent == bvh.skeleton.joints[j].parent);
    CHECK((back.skeleton.joints[j].offset - bvh.skeleton.joints[j].offset).norm() < 1e-5);
    CHECK(back.skeleton.joints[j].channels == bvh.skeleton.joints[j].channels);
  }
  CHECK(back.frame_time == doctest::Approx(bvh.frame_time).epsilon(1e-9));
  CHECK((back.frames - bvh.frames).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("bvh fps rejects non-integer frame rates") {
  BvhData bvh = parse_bvh_string(kChain3);
  bvh.frame_time = 0.03;  // 33.33 fps
  CHECK_THROWS_AS(bvh.fps(), DataError);
}
