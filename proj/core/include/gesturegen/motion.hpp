// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gesturegen {

/// Global 3D joint positions over time. One row per frame, columns laid out
/// [x1, y1, z1, x2, y2, z2, ...] in centimeters.
struct MotionSequence {
  int fps = 0;
  std::vector<std::string> joint_names;
  Eigen::MatrixXd positions;  // frames x (3 * joints)

  int frames() const { return static_cast<int>(positions.rows()); }
  int joints() const { return static_cast<int>(joint_names.size()); }
};

/// Keep every (fps / target_fps)-th frame. The source rate must be an integer
/// multiple of the target rate; anything else is an error.
MotionSequence resample_motion(const MotionSequence& m, int target_fps);

/// Subtract the hip joint's position from every joint, per frame. The hip
/// columns of the result are exactly zero.
MotionSequence hip_center(const MotionSequence& m, int hip_joint);

/// Motion CSV: first line `# fps=<int>`, then a `<joint>_x,<joint>_y,...`
/// header, then one frame per row.
void write_motion_csv(const MotionSequence& m, const std::string& path);
MotionSequence read_motion_csv(const std::string& path);

}  // namespace gesturegen
