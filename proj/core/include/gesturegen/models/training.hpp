// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gesturegen/dataset/loader.hpp"
#include "gesturegen/dataset/standardizer.hpp"
#include "gesturegen/models/config.hpp"
#include "gesturegen/nn/network.hpp"

namespace gesturegen {

struct TrainLog {
  std::vector<double> epoch_loss;  // mean training MSE per epoch
  double val_mse = 0.0;            // final validation MSE, standardized space
};

/// A trained system plus everything needed to run it: networks, the
/// normalization fitted on the training split, and the joint layout.
/// motion_e/motion_d stay empty except for aud2repr2pose.
struct GestureModel {
  std::string kind;
  ModelConfig config;
  nn::Network net;  // aud2pose net, aud2motion net, or SpeechE
  nn::Network motion_e, motion_d;
  NormalizationStats feature_stats;
  NormalizationStats motion_stats;  // over 6J [pose, velocity] dims
  std::vector<std::string> joint_names;
  int fps = kMotionFps;
  TrainLog log;      // main network
  TrainLog dae_log;  // aud2repr2pose only

  bool has_dae() const { return kind == "aud2repr2pose"; }
};

/// Layer stacks for the three systems, exposed for assembly-level checks.
std::vector<nn::LayerSpec> aud2pose_arch(int in_dim, int hidden, int fc_layers,
                                         double dropout_p, int out_dim);
std::vector<nn::LayerSpec> aud2motion_arch(int in_dim, int hidden, int fc_layers,
                                           double dropout_p, int out_dim);
std::vector<nn::LayerSpec> dae_arch(int frame_dim, int bottleneck);

/// Trains the configured system on the train split and reports validation
/// MSE on the val split (which may be empty). Deterministic per config.seed.
GestureModel train_gesture_model(const std::vector<LoadedPair>& train,
                                 const std::vector<LoadedPair>& val,
                                 const ModelConfig& config);

void save_gesture_model(const GestureModel& model, const std::string& dir);
GestureModel load_gesture_model(const std::string& dir);

}  // namespace gesturegen
