// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/nn/network.hpp"

#include "gesturegen/errors.hpp"

namespace gesturegen::nn {

Network::Network(std::vector<LayerSpec> specs, uint64_t seed)
    : specs_(std::move(specs)), rng_(seed), seed_(seed) {
  if (specs_.empty()) throw ConfigError("network needs at least one layer");
  for (std::size_t i = 1; i < specs_.size(); ++i) {
    int produced = specs_[i - 1].effective_out();
    if (specs_[i].in_dim != produced)
      throw ConfigError("layer " + std::to_string(i) + " ('" + specs_[i].kind + "') expects " +
                        std::to_string(specs_[i].in_dim) + " inputs but layer " +
                        std::to_string(i - 1) + " produces " + std::to_string(produced));
  }
  for (std::size_t i = 0; i < specs_.size(); ++i)
    layers_.push_back(make_layer(specs_[i], "layer" + std::to_string(i) + ".", rng_));
}

Network::Network(const Network& other)
    : specs_(other.specs_), mode_(other.mode_), rng_(other.rng_), seed_(other.seed_) {
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other) {
  if (this == &other) return *this;
  Network copy(other);
  *this = std::move(copy);
  return *this;
}

SeqBatch Network::forward(const SeqBatch& x) {
  if (mode_ == Mode::Eval) return forward_eval(x);
  SeqBatch cur = x;
  for (auto& layer : layers_) cur = layer->forward_train(cur, rng_);
  return cur;
}

SeqBatch Network::forward_eval(const SeqBatch& x) const {
  SeqBatch cur = x;
  for (const auto& layer : layers_) cur = layer->forward_eval(cur);
  return cur;
}

SeqBatch Network::backward(const SeqBatch& loss_grad) {
  if (mode_ != Mode::Train) throw Error("backward requires train mode");
  SeqBatch cur = loss_grad;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) cur = (*it)->backward(cur);
  return cur;
}

void Network::zero_grad() {
  for (ParamTensor* p : parameters()) p->zero_grad();
}

std::vector<ParamTensor*> Network::parameters() {
  std::vector<ParamTensor*> out;
  for (auto& layer : layers_)
    for (ParamTensor* p : layer->params()) out.push_back(p);
  return out;
}

std::vector<const ParamTensor*> Network::parameters() const {
  std::vector<const ParamTensor*> out;
  for (const auto& layer : layers_)
    for (ParamTensor* p : const_cast<Layer&>(*layer).params()) out.push_back(p);
  return out;
}

std::vector<ParamTensor*> Network::trainable_parameters() {
  std::vector<ParamTensor*> out;
  for (ParamTensor* p : parameters())
    if (p->trainable) out.push_back(p);
  return out;
}

void Network::reseed(uint64_t seed) {
  seed_ = seed;
  rng_.reseed(seed);
}

int Network::input_dim() const { return specs_.front().in_dim; }

int Network::output_dim() const { return specs_.back().effective_out(); }

}  // namespace gesturegen::nn
