// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>

namespace gesturegen {

/// Hyperparameters for the three systems. Defaults follow the paper's
/// training setup; default_config() switches the per-model values.
struct ModelConfig {
  std::string model_kind = "aud2pose";  // aud2pose | aud2motion | aud2repr2pose
  std::string feature_kind = "mfcc";
  int C = 30;              // half window; inputs span 2C+1 frames
  int hidden = 256;
  int fc_layers = 3;
  double dropout = 0.1;
  double lr = 0.001;
  int batch_size = 2056;
  int epochs = 120;
  int dae_batch_size = 128;
  int dae_epochs = 20;
  int bottleneck = 325;
  int chunk_len = 100;
  double noise_scale = 0.05;
  bool predict_velocity = true;
  uint64_t seed = 1;
};

ModelConfig default_config(const std::string& model_kind);
void validate_config(const ModelConfig& config);

nlohmann::json config_to_json(const ModelConfig& config);
ModelConfig config_from_json(const nlohmann::json& j);
ModelConfig load_config(const std::string& path);

/// Applies one "key=value" override (the CLI --set flag).
void apply_override(ModelConfig& config, const std::string& key_value);

}  // namespace gesturegen
