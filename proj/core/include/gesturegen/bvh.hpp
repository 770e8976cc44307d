// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gesturegen/motion.hpp"

namespace gesturegen {

enum class Channel { Xposition, Yposition, Zposition, Xrotation, Yrotation, Zrotation };

bool is_rotation(Channel c);
Channel channel_from_string(const std::string& s);

struct Joint {
  std::string name;
  int parent = -1;  // -1 for the root
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  std::vector<Channel> channels;
  bool has_end_site = false;
  Eigen::Vector3d end_site_offset = Eigen::Vector3d::Zero();
};

struct Skeleton {
  std::vector<Joint> joints;  // parents precede children

  int joint_count() const { return static_cast<int>(joints.size()); }
  int channel_count() const;
  int find_joint(const std::string& name) const;  // -1 if absent
};

struct BvhData {
  Skeleton skeleton;
  double frame_time = 0.0;                  // seconds per frame
  Eigen::MatrixXd frames;                   // frames x total channels
  std::vector<int> channel_offset;          // per joint, index of first channel

  int frame_count() const { return static_cast<int>(frames.rows()); }
  int fps() const;
};

BvhData parse_bvh(const std::string& path);
BvhData parse_bvh_string(const std::string& text, const std::string& origin = "<string>");
void write_bvh(const BvhData& bvh, const std::string& path);

/// Basis rotation about a single axis, angle in degrees. Right handed:
/// rotation_matrix(Zrotation, 90) maps (1,0,0) to (0,1,0).
Eigen::Matrix3d rotation_matrix(Channel axis, double degrees);

/// Global joint positions for one frame of channel data.
/// Rotations compose in file channel order (intrinsic), translations on the
/// root (or any joint with position channels) add to the offset before the
/// parent transform is applied.
std::vector<Eigen::Vector3d> forward_kinematics(const Skeleton& skeleton,
                                                const std::vector<int>& channel_offset,
                                                const Eigen::RowVectorXd& frame);

/// Run FK over every frame and pack the result as a MotionSequence.
MotionSequence to_motion_sequence(const BvhData& bvh);

}  // namespace gesturegen
