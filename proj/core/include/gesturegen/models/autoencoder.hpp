// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>

#include "gesturegen/models/config.hpp"
#include "gesturegen/models/training.hpp"
#include "gesturegen/nn/network.hpp"
#include "gesturegen/nn/rng.hpp"

namespace gesturegen {

/// Adds zero-mean Gaussian noise with per-dimension std equal to
/// noise_scale * per_dim_std.
Eigen::MatrixXd corrupt(const Eigen::MatrixXd& frames, double noise_scale,
                        const Eigen::RowVectorXd& per_dim_std, nn::Rng& rng);

struct TrainedDae {
  nn::Network motion_e;  // affine frame_dim -> bottleneck
  nn::Network motion_d;  // affine bottleneck -> frame_dim
  TrainLog log;
};

/// Denoising autoencoder over standardized [pose, velocity] frames: corrupt
/// the inputs, reconstruct the clean frames under MSE. Validation MSE is the
/// clean-input reconstruction error.
TrainedDae train_dae(const Eigen::MatrixXd& train_frames, const Eigen::MatrixXd& val_frames,
                     const ModelConfig& config);

Eigen::MatrixXd encode_motion(const nn::Network& motion_e, const Eigen::MatrixXd& frames);
Eigen::MatrixXd decode_repr(const nn::Network& motion_d, const Eigen::MatrixXd& z);

/// Validation reconstruction MSE per bottleneck dim, trained with a shared
/// seed. One result row per requested dim, in the requested order.
std::vector<std::pair<int, double>> dae_capacity_curve(const Eigen::MatrixXd& train_frames,
                                                       const Eigen::MatrixXd& val_frames,
                                                       const ModelConfig& base,
                                                       const std::vector<int>& dims);

}  // namespace gesturegen
