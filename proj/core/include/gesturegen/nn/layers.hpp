// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "gesturegen/nn/rng.hpp"

namespace gesturegen::nn {

/// A (possibly time-structured) activation batch. Rows are time-major:
/// row t*batch + b holds sample b at step t. Plain batches use time = 1.
struct SeqBatch {
  Eigen::MatrixXd data;
  int time = 1;
  int batch = 0;

  SeqBatch() = default;
  SeqBatch(Eigen::MatrixXd d, int t, int b) : data(std::move(d)), time(t), batch(b) {}

  int dim() const { return static_cast<int>(data.cols()); }
  Eigen::Block<Eigen::MatrixXd> step(int t) { return data.middleRows(t * batch, batch); }
  Eigen::Block<const Eigen::MatrixXd> step(int t) const {
    return data.middleRows(t * batch, batch);
  }
};

struct ParamTensor {
  std::string name;
  Eigen::MatrixXd values;
  Eigen::MatrixXd grad;
  bool trainable = true;  // batch-norm running stats ride along untrained

  void zero_grad() { grad.setZero(values.rows(), values.cols()); }
};

struct LayerSpec {
  std::string kind;  // affine | relu | batch_norm | dropout | gru | linear_out
  int in_dim = 0;
  int out_dim = 0;
  double dropout_p = 0.0;
  bool bidirectional = false;     // gru
  bool return_sequences = true;   // gru; false keeps only the final states
  double momentum = 0.1;          // batch_norm running-stat update
  double eps = 1e-5;              // batch_norm

  /// Width actually produced: 2x hidden for a bidirectional GRU.
  int effective_out() const {
    return kind == "gru" && bidirectional ? 2 * out_dim : out_dim;
  }
};

LayerSpec affine(int in, int out);
LayerSpec relu(int dim);
LayerSpec batch_norm(int dim, double momentum = 0.1, double eps = 1e-5);
LayerSpec dropout(int dim, double p);
LayerSpec gru(int in, int hidden, bool bidirectional, bool return_sequences);
LayerSpec linear_out(int in, int out);

class Layer {
 public:
  virtual ~Layer() = default;

  const LayerSpec& spec() const { return spec_; }

  /// Caches activations for backward; draws any masks from rng.
  virtual SeqBatch forward_train(const SeqBatch& x, Rng& rng) = 0;

  /// Pure function of the parameters; no caching, no mutation.
  virtual SeqBatch forward_eval(const SeqBatch& x) const = 0;

  /// Consumes the cache from the last forward_train; accumulates parameter
  /// grads and returns the input gradient.
  virtual SeqBatch backward(const SeqBatch& dy) = 0;

  virtual std::vector<ParamTensor*> params() { return {}; }

  virtual std::unique_ptr<Layer> clone() const = 0;

 protected:
  explicit Layer(LayerSpec spec) : spec_(std::move(spec)) {}
  void check_input(const SeqBatch& x) const;
  void require_cache(bool have) const;
  LayerSpec spec_;
};

/// Builds one layer from its spec; random parameters come from rng using
/// uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)), biases start at zero. The name
/// prefix ("layer3.") namespaces the layer's parameters in checkpoints.
std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const std::string& prefix, Rng& rng);

}  // namespace gesturegen::nn
