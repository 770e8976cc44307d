// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/models/inference.hpp"

#include <algorithm>

#include "gesturegen/errors.hpp"
#include "gesturegen/models/autoencoder.hpp"

namespace gesturegen {
namespace {

/// Evaluates the many-to-one net on every frame's clamped window, batching
/// centers to keep GRU activations bounded.
Eigen::MatrixXd window_outputs(const nn::Network& net, const Eigen::MatrixXd& features,
                               int C) {
  int frames = static_cast<int>(features.rows());
  int time = 2 * C + 1;
  Eigen::MatrixXd out(frames, net.output_dim());
  constexpr int kBatch = 512;
  for (int lo = 0; lo < frames; lo += kBatch) {
    int batch = std::min(kBatch, frames - lo);
    nn::SeqBatch x;
    x.time = time;
    x.batch = batch;
    x.data.resize(static_cast<Eigen::Index>(time) * batch, features.cols());
    for (int b = 0; b < batch; ++b)
      for (int i = -C; i <= C; ++i) {
        Eigen::Index src = std::clamp<Eigen::Index>(lo + b + i, 0, frames - 1);
        x.data.row(static_cast<Eigen::Index>(i + C) * batch + b) = features.row(src);
      }
    out.middleRows(lo, batch) = net.forward_eval(x).data;
  }
  return out;
}

}  // namespace

MotionSequence predict(const GestureModel& model, const FeatureSequence& features) {
  if (features.frames() == 0) throw DataError("no feature frames to predict from");
  if (features.dim() != model.feature_stats.dim())
    throw DataError("feature dimension " + std::to_string(features.dim()) +
                    " does not match the model's " +
                    std::to_string(model.feature_stats.dim()));
  if (features.fps != model.fps)
    throw DataError("feature rate " + std::to_string(features.fps) +
                    " fps does not match the model's " + std::to_string(model.fps));

  Eigen::MatrixXd sf = apply_standardizer(model.feature_stats, features.data);
  int pose_dim = 3 * static_cast<int>(model.joint_names.size());

  Eigen::MatrixXd spose;
  if (model.kind == "aud2pose") {
    spose = window_outputs(model.net, sf, model.config.C).leftCols(pose_dim);
  } else if (model.kind == "aud2repr2pose") {
    Eigen::MatrixXd z = window_outputs(model.net, sf, model.config.C);
    spose = decode_repr(model.motion_d, z).leftCols(pose_dim);
  } else if (model.kind == "aud2motion") {
    nn::SeqBatch x{sf, features.frames(), 1};
    spose = model.net.forward_eval(x).data.leftCols(pose_dim);
  } else {
    throw ConfigError("unknown model kind '" + model.kind + "'");
  }

  MotionSequence motion;
  motion.fps = model.fps;
  motion.joint_names = model.joint_names;
  motion.positions = invert_standardizer(slice_stats(model.motion_stats, 0, pose_dim), spose);
  return motion;
}

}  // namespace gesturegen
