// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/models/config.hpp"

#include <fstream>

#include "gesturegen/dataset/loader.hpp"
#include "gesturegen/errors.hpp"

namespace gesturegen {

ModelConfig default_config(const std::string& model_kind) {
  ModelConfig c;
  c.model_kind = model_kind;
  if (model_kind == "aud2pose" || model_kind == "aud2repr2pose") {
    c.batch_size = 2056;
    c.epochs = 120;
    c.predict_velocity = true;
  } else if (model_kind == "aud2motion") {
    c.batch_size = 256;
    c.epochs = 500;
    c.predict_velocity = false;
  } else {
    throw ConfigError("unknown model kind '" + model_kind + "'");
  }
  return c;
}

void validate_config(const ModelConfig& c) {
  if (c.model_kind != "aud2pose" && c.model_kind != "aud2motion" &&
      c.model_kind != "aud2repr2pose")
    throw ConfigError("unknown model kind '" + c.model_kind + "'");
  feature_dim(c.feature_kind);  // throws on unknown names
  if (c.C < 0) throw ConfigError("C must be nonnegative");
  if (c.hidden < 1 || c.fc_layers < 1) throw ConfigError("hidden and fc_layers must be positive");
  if (c.dropout < 0.0 || c.dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  if (c.lr <= 0.0) throw ConfigError("lr must be positive");
  if (c.batch_size < 1 || c.dae_batch_size < 1) throw ConfigError("batch sizes must be positive");
  if (c.epochs < 0 || c.dae_epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (c.bottleneck < 1) throw ConfigError("bottleneck must be positive");
  if (c.chunk_len < 2) throw ConfigError("chunk_len must be at least 2");
  if (c.noise_scale < 0.0) throw ConfigError("noise_scale must be nonnegative");
}

nlohmann::json config_to_json(const ModelConfig& c) {
  return {{"model_kind", c.model_kind},
          {"feature_kind", c.feature_kind},
          {"C", c.C},
          {"hidden", c.hidden},
          {"fc_layers", c.fc_layers},
          {"dropout", c.dropout},
          {"lr", c.lr},
          {"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"dae_batch_size", c.dae_batch_size},
          {"dae_epochs", c.dae_epochs},
          {"bottleneck", c.bottleneck},
          {"chunk_len", c.chunk_len},
          {"noise_scale", c.noise_scale},
          {"predict_velocity", c.predict_velocity},
          {"seed", c.seed}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig base;
  if (j.contains("model_kind")) base = default_config(j.at("model_kind").get<std::string>());
  try {
    base.feature_kind = j.value("feature_kind", base.feature_kind);
    base.C = j.value("C", base.C);
    base.hidden = j.value("hidden", base.hidden);
    base.fc_layers = j.value("fc_layers", base.fc_layers);
    base.dropout = j.value("dropout", base.dropout);
    base.lr = j.value("lr", base.lr);
    base.batch_size = j.value("batch_size", base.batch_size);
    base.epochs = j.value("epochs", base.epochs);
    base.dae_batch_size = j.value("dae_batch_size", base.dae_batch_size);
    base.dae_epochs = j.value("dae_epochs", base.dae_epochs);
    base.bottleneck = j.value("bottleneck", base.bottleneck);
    base.chunk_len = j.value("chunk_len", base.chunk_len);
    base.noise_scale = j.value("noise_scale", base.noise_scale);
    base.predict_velocity = j.value("predict_velocity", base.predict_velocity);
    base.seed = j.value("seed", base.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate_config(base);
  return base;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return config_from_json(j);
}

void apply_override(ModelConfig& config, const std::string& key_value) {
  std::size_t eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must be key=value, got '" + key_value + "'");
  std::string key = key_value.substr(0, eq);
  std::string value = key_value.substr(eq + 1);

  nlohmann::json j = config_to_json(config);
  if (!j.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  try {
    if (j.at(key).is_string())
      j[key] = value;
    else if (j.at(key).is_boolean())
      j[key] = value == "true" || value == "1";
    else if (j.at(key).is_number_integer() || j.at(key).is_number_unsigned())
      j[key] = std::stoll(value);
    else
      j[key] = std::stod(value);
  } catch (const std::exception&) {
    throw ConfigError("bad value '" + value + "' for config key '" + key + "'");
  }
  // Changing the model kind re-applies that model's defaults first.
  if (key == "model_kind") {
    ModelConfig fresh = default_config(value);
    fresh.feature_kind = config.feature_kind;
    fresh.seed = config.seed;
    config = fresh;
    validate_config(config);
    return;
  }
  config = config_from_json(j);
}

}  // namespace gesturegen
