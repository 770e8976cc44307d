// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gesturegen/audio_features.hpp"
#include "gesturegen/motion.hpp"

namespace gesturegen {

/// [g_t, delta g_t] per frame: positions concatenated with their backward
/// difference (delta g_0 = 0). frames x 2D for a frames x D input.
Eigen::MatrixXd pose_velocity_frames(const Eigen::MatrixXd& positions);

/// Feature window [t-C, t+C] with edge frames replicated beyond the
/// sequence bounds; (2C+1) x dim.
Eigen::MatrixXd feature_window(const Eigen::MatrixXd& features, int C, int t);

struct WindowedExample {
  Eigen::MatrixXd input;      // (2C+1) x feature_dim
  Eigen::RowVectorXd target;  // 6J, or 3J without velocity
};

/// One example per frame; lengths truncated to the shorter of the two
/// sequences. Feature and motion rates must match.
std::vector<WindowedExample> build_windows(const FeatureSequence& features,
                                           const MotionSequence& motion, int C,
                                           bool predict_velocity = true);

/// Non-overlapping [start, start + chunk_len) row ranges; the trailing
/// remainder shorter than chunk_len is dropped.
std::vector<std::pair<int, int>> chunk_ranges(int frames, int chunk_len);

}  // namespace gesturegen
