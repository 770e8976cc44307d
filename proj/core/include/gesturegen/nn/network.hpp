// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gesturegen/nn/layers.hpp"

namespace gesturegen::nn {

enum class Mode { Train, Eval };

class Network {
 public:
  Network() = default;
  Network(std::vector<LayerSpec> specs, uint64_t seed);

  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) = default;
  Network& operator=(Network&&) = default;

  /// Respects the current mode: train mode caches for backward and draws
  /// dropout masks from the network RNG.
  SeqBatch forward(const SeqBatch& x);

  /// Always eval semantics; pure, safe to call concurrently on a const net.
  SeqBatch forward_eval(const SeqBatch& x) const;

  /// Propagates from the loss gradient back to the input, accumulating
  /// parameter grads along the way.
  SeqBatch backward(const SeqBatch& loss_grad);

  void zero_grad();

  std::vector<ParamTensor*> parameters();
  std::vector<const ParamTensor*> parameters() const;
  std::vector<ParamTensor*> trainable_parameters();

  void set_mode(Mode m) { mode_ = m; }
  Mode mode() const { return mode_; }

  /// Resetting the seed replays the exact dropout mask stream; gradient
  /// checking relies on this.
  void reseed(uint64_t seed);
  uint64_t seed() const { return seed_; }
  Rng& rng() { return rng_; }

  const std::vector<LayerSpec>& specs() const { return specs_; }
  int input_dim() const;
  int output_dim() const;

 private:
  std::vector<LayerSpec> specs_;
  std::vector<std::unique_ptr<Layer>> layers_;
  Mode mode_ = Mode::Train;
  Rng rng_;
  uint64_t seed_ = 0;
};

}  // namespace gesturegen::nn
