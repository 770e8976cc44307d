// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

#include "gesturegen/motion.hpp"
#include "gesturegen/nn/rng.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("gesturegen_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline Eigen::MatrixXd random_matrix(int rows, int cols, gesturegen::nn::Rng& rng,
                                     double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = scale * rng.gaussian();
  return m;
}

inline gesturegen::MotionSequence random_motion(int frames, int joints, uint64_t seed,
                                                int fps = 20, double scale = 10.0) {
  gesturegen::nn::Rng rng(seed);
  gesturegen::MotionSequence m;
  m.fps = fps;
  for (int j = 0; j < joints; ++j) m.joint_names.push_back("j" + std::to_string(j));
  m.positions = random_matrix(frames, 3 * joints, rng, scale);
  return m;
}

}  // namespace testutil
