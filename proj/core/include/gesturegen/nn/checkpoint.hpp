// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>

#include "gesturegen/nn/network.hpp"

namespace gesturegen::nn {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  std::string model_kind;
  Network net;
  nlohmann::json meta;  // model-level extras (normalization stats, config)
};

/// JSON checkpoint: format_version, model_kind, rng_seed, layer specs, named
/// parameter arrays (shape + row-major values), and a free-form meta object.
/// Doubles survive the round trip bit-for-bit.
void save_checkpoint(const Network& net, const std::string& model_kind,
                     const nlohmann::json& meta, const std::string& path);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace gesturegen::nn
