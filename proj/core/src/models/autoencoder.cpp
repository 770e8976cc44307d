// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/models/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gesturegen/errors.hpp"
#include "gesturegen/nn/adam.hpp"
#include "gesturegen/nn/loss.hpp"

namespace gesturegen {
namespace {

Eigen::RowVectorXd column_std(const Eigen::MatrixXd& frames) {
  Eigen::Index n = frames.rows();
  if (n < 2) return Eigen::RowVectorXd::Zero(frames.cols());
  Eigen::RowVectorXd mean = frames.colwise().mean();
  Eigen::RowVectorXd var =
      (frames.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(n - 1);
  return var.array().sqrt();
}

/// Copies parameter values (not grads) into a fresh single-layer network.
nn::Network extract_layer(const nn::Network& stacked, std::size_t first_param,
                          nn::LayerSpec spec, uint64_t seed) {
  nn::Network single({std::move(spec)}, seed);
  std::vector<const nn::ParamTensor*> src = stacked.parameters();
  std::vector<nn::ParamTensor*> dst = single.parameters();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i]->values = src[first_param + i]->values;
  single.set_mode(nn::Mode::Eval);
  return single;
}

}  // namespace

Eigen::MatrixXd corrupt(const Eigen::MatrixXd& frames, double noise_scale,
                        const Eigen::RowVectorXd& per_dim_std, nn::Rng& rng) {
  if (per_dim_std.size() != frames.cols())
    throw DataError("noise std dimension does not match the frames");
  Eigen::MatrixXd noisy = frames;
  for (Eigen::Index r = 0; r < noisy.rows(); ++r)
    for (Eigen::Index c = 0; c < noisy.cols(); ++c)
      noisy(r, c) += noise_scale * per_dim_std(c) * rng.gaussian();
  return noisy;
}

TrainedDae train_dae(const Eigen::MatrixXd& train_frames, const Eigen::MatrixXd& val_frames,
                     const ModelConfig& config) {
  if (train_frames.rows() < 2) throw DataError("need at least two frames to train the DAE");
  int frame_dim = static_cast<int>(train_frames.cols());
  if (config.bottleneck <= 0) throw ConfigError("bottleneck must be positive");

  nn::Network net(dae_arch(frame_dim, config.bottleneck), config.seed + 2);
  net.set_mode(nn::Mode::Train);
  Eigen::RowVectorXd per_dim_std = column_std(train_frames);

  nn::AdamState adam;
  adam.lr = config.lr;
  nn::Rng noise_rng(config.seed + 3);
  nn::Rng shuffle_rng(config.seed + 4);
  std::vector<std::size_t> order(static_cast<std::size_t>(train_frames.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainedDae dae;
  for (int epoch = 0; epoch < config.dae_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t seen = 0;
    int batch_index = 0;
    for (std::size_t lo = 0; lo < order.size();
         lo += static_cast<std::size_t>(config.dae_batch_size)) {
      std::size_t hi =
          std::min(order.size(), lo + static_cast<std::size_t>(config.dae_batch_size));
      int batch = static_cast<int>(hi - lo);
      Eigen::MatrixXd clean(batch, frame_dim);
      for (int b = 0; b < batch; ++b) clean.row(b) = train_frames.row(order[lo + b]);
      Eigen::MatrixXd noisy = corrupt(clean, config.noise_scale, per_dim_std, noise_rng);

      nn::SeqBatch out = net.forward({std::move(noisy), 1, batch});
      auto [loss, grad] = nn::mse_loss(out.data, clean);
      if (!std::isfinite(loss))
        throw NumericalError("DAE loss became non-finite", epoch, batch_index);
      net.zero_grad();
      net.backward({std::move(grad), 1, batch});
      nn::adam_step(net.trainable_parameters(), adam);
      epoch_loss += loss * batch;
      seen += static_cast<std::size_t>(batch);
      ++batch_index;
    }
    dae.log.epoch_loss.push_back(epoch_loss / static_cast<double>(seen));
  }

  net.set_mode(nn::Mode::Eval);
  if (val_frames.rows() > 0) {
    nn::SeqBatch out = net.forward_eval({val_frames, 1, static_cast<int>(val_frames.rows())});
    dae.log.val_mse = nn::mse_loss(out.data, val_frames).first;
  }

  dae.motion_e = extract_layer(net, 0, nn::affine(frame_dim, config.bottleneck), config.seed);
  dae.motion_d = extract_layer(net, 2, nn::affine(config.bottleneck, frame_dim), config.seed);
  return dae;
}

Eigen::MatrixXd encode_motion(const nn::Network& motion_e, const Eigen::MatrixXd& frames) {
  return motion_e.forward_eval({frames, 1, static_cast<int>(frames.rows())}).data;
}

Eigen::MatrixXd decode_repr(const nn::Network& motion_d, const Eigen::MatrixXd& z) {
  return motion_d.forward_eval({z, 1, static_cast<int>(z.rows())}).data;
}

std::vector<std::pair<int, double>> dae_capacity_curve(const Eigen::MatrixXd& train_frames,
                                                       const Eigen::MatrixXd& val_frames,
                                                       const ModelConfig& base,
                                                       const std::vector<int>& dims) {
  std::vector<std::pair<int, double>> curve;
  for (int dim : dims) {
    ModelConfig config = base;
    config.bottleneck = dim;
    TrainedDae dae = train_dae(train_frames, val_frames, config);
    curve.emplace_back(dim, dae.log.val_mse);
  }
  return curve;
}

}  // namespace gesturegen
