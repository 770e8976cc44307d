// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/models/windows.hpp"

#include <algorithm>

#include "gesturegen/errors.hpp"

namespace gesturegen {

Eigen::MatrixXd pose_velocity_frames(const Eigen::MatrixXd& positions) {
  if (positions.rows() == 0) throw DataError("pose_velocity_frames on an empty sequence");
  Eigen::Index frames = positions.rows(), dim = positions.cols();
  Eigen::MatrixXd out(frames, 2 * dim);
  out.leftCols(dim) = positions;
  out.row(0).tail(dim).setZero();
  if (frames > 1)
    out.bottomRows(frames - 1).rightCols(dim) =
        positions.bottomRows(frames - 1) - positions.topRows(frames - 1);
  return out;
}

Eigen::MatrixXd feature_window(const Eigen::MatrixXd& features, int C, int t) {
  Eigen::Index frames = features.rows();
  if (frames == 0) throw DataError("feature_window on an empty sequence");
  if (t < 0 || t >= frames) throw DataError("window center out of range");
  Eigen::MatrixXd out(2 * C + 1, features.cols());
  for (int i = -C; i <= C; ++i) {
    Eigen::Index src = std::clamp<Eigen::Index>(t + i, 0, frames - 1);
    out.row(i + C) = features.row(src);
  }
  return out;
}

std::vector<WindowedExample> build_windows(const FeatureSequence& features,
                                           const MotionSequence& motion, int C,
                                           bool predict_velocity) {
  if (features.fps != motion.fps)
    throw DataError("feature rate " + std::to_string(features.fps) +
                    " does not match motion rate " + std::to_string(motion.fps));
  int frames = std::min(features.frames(), motion.frames());
  if (frames == 0) throw DataError("build_windows on empty sequences");

  Eigen::MatrixXd targets = pose_velocity_frames(motion.positions.topRows(frames));
  Eigen::Index target_dim = predict_velocity ? targets.cols() : targets.cols() / 2;

  std::vector<WindowedExample> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    WindowedExample ex;
    ex.input = feature_window(features.data.topRows(frames), C, t);
    ex.target = targets.row(t).head(target_dim);
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<std::pair<int, int>> chunk_ranges(int frames, int chunk_len) {
  if (chunk_len < 1) throw DataError("chunk_len must be positive");
  std::vector<std::pair<int, int>> out;
  for (int start = 0; start + chunk_len <= frames; start += chunk_len)
    out.emplace_back(start, start + chunk_len);
  return out;
}

}  // namespace gesturegen
