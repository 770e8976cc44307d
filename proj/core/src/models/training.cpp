// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/models/training.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "gesturegen/errors.hpp"
#include "gesturegen/models/autoencoder.hpp"
#include "gesturegen/models/windows.hpp"
#include "gesturegen/nn/adam.hpp"
#include "gesturegen/nn/checkpoint.hpp"
#include "gesturegen/nn/loss.hpp"

namespace gesturegen {
namespace {

namespace fs = std::filesystem;
using nn::SeqBatch;

/// One training example for the windowed (many-to-one) systems: a window
/// center inside a pair's standardized feature matrix plus its target row.
struct WindowRef {
  const Eigen::MatrixXd* features;
  const Eigen::MatrixXd* targets;
  int t;
};

SeqBatch assemble_window_batch(const std::vector<WindowRef>& examples,
                               const std::vector<std::size_t>& order, std::size_t lo,
                               std::size_t hi, int C, Eigen::MatrixXd& targets_out) {
  int batch = static_cast<int>(hi - lo);
  int time = 2 * C + 1;
  const WindowRef& first = examples[order[lo]];
  SeqBatch x;
  x.time = time;
  x.batch = batch;
  x.data.resize(static_cast<Eigen::Index>(time) * batch, first.features->cols());
  targets_out.resize(batch, first.targets->cols());
  for (int b = 0; b < batch; ++b) {
    const WindowRef& ex = examples[order[lo + b]];
    Eigen::Index frames = ex.features->rows();
    for (int i = -C; i <= C; ++i) {
      Eigen::Index src = std::clamp<Eigen::Index>(ex.t + i, 0, frames - 1);
      x.data.row(static_cast<Eigen::Index>(i + C) * batch + b) = ex.features->row(src);
    }
    targets_out.row(b) = ex.targets->row(ex.t);
  }
  return x;
}

/// A chunk example for the sequence-to-sequence system.
struct ChunkRef {
  const Eigen::MatrixXd* features;
  const Eigen::MatrixXd* targets;
  int start;
};

SeqBatch assemble_chunk_batch(const std::vector<ChunkRef>& examples,
                              const std::vector<std::size_t>& order, std::size_t lo,
                              std::size_t hi, int chunk_len, Eigen::MatrixXd& targets_out) {
  int batch = static_cast<int>(hi - lo);
  const ChunkRef& first = examples[order[lo]];
  SeqBatch x;
  x.time = chunk_len;
  x.batch = batch;
  x.data.resize(static_cast<Eigen::Index>(chunk_len) * batch, first.features->cols());
  targets_out.resize(static_cast<Eigen::Index>(chunk_len) * batch, first.targets->cols());
  for (int b = 0; b < batch; ++b) {
    const ChunkRef& ex = examples[order[lo + b]];
    for (int t = 0; t < chunk_len; ++t) {
      x.data.row(static_cast<Eigen::Index>(t) * batch + b) = ex.features->row(ex.start + t);
      targets_out.row(static_cast<Eigen::Index>(t) * batch + b) =
          ex.targets->row(ex.start + t);
    }
  }
  return x;
}

template <typename Example, typename Assemble>
TrainLog run_epochs(nn::Network& net, const std::vector<Example>& examples, Assemble assemble,
                    int batch_size, int epochs, double lr, uint64_t shuffle_seed) {
  TrainLog log;
  if (examples.empty()) throw DataError("no training examples");
  net.set_mode(nn::Mode::Train);

  nn::AdamState adam;
  adam.lr = lr;
  nn::Rng shuffle_rng(shuffle_seed);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  Eigen::MatrixXd targets;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t seen = 0;
    int batch_index = 0;
    for (std::size_t lo = 0; lo < order.size(); lo += static_cast<std::size_t>(batch_size)) {
      std::size_t hi = std::min(order.size(), lo + static_cast<std::size_t>(batch_size));
      SeqBatch x = assemble(order, lo, hi, targets);
      SeqBatch out = net.forward(x);
      auto [loss, grad] = nn::mse_loss(out.data, targets);
      if (!std::isfinite(loss))
        throw NumericalError("training loss became non-finite", epoch, batch_index);
      net.zero_grad();
      net.backward({std::move(grad), out.time, out.batch});
      nn::adam_step(net.trainable_parameters(), adam);
      epoch_loss += loss * static_cast<double>(hi - lo);
      seen += hi - lo;
      ++batch_index;
    }
    log.epoch_loss.push_back(epoch_loss / static_cast<double>(seen));
  }
  return log;
}

template <typename Example, typename Assemble>
double eval_mse(const nn::Network& net, const std::vector<Example>& examples, Assemble assemble,
                int batch_size) {
  if (examples.empty()) return 0.0;
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  Eigen::MatrixXd targets;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t lo = 0; lo < order.size(); lo += static_cast<std::size_t>(batch_size)) {
    std::size_t hi = std::min(order.size(), lo + static_cast<std::size_t>(batch_size));
    SeqBatch x = assemble(order, lo, hi, targets);
    SeqBatch out = net.forward_eval(x);
    auto [loss, grad] = nn::mse_loss(out.data, targets);
    (void)grad;
    total += loss * static_cast<double>(out.data.size());
    count += static_cast<std::size_t>(out.data.size());
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

std::vector<std::string> motion_stat_labels(const std::vector<std::string>& joint_names) {
  std::vector<std::string> labels;
  const char* axes[3] = {"_x", "_y", "_z"};
  for (const std::string& j : joint_names)
    for (const char* a : axes) labels.push_back(j + a);
  for (const std::string& j : joint_names)
    for (const char* a : axes) labels.push_back("d_" + j + a);
  return labels;
}

Eigen::MatrixXd vstack(const std::vector<Eigen::MatrixXd>& parts) {
  Eigen::Index rows = 0;
  for (const Eigen::MatrixXd& p : parts) rows += p.rows();
  if (rows == 0 || parts.empty()) throw DataError("nothing to stack");
  Eigen::MatrixXd out(rows, parts[0].cols());
  Eigen::Index at = 0;
  for (const Eigen::MatrixXd& p : parts) {
    out.middleRows(at, p.rows()) = p;
    at += p.rows();
  }
  return out;
}

void check_pairs(const std::vector<LoadedPair>& train, const std::vector<LoadedPair>& val) {
  if (train.empty()) throw DataError("training split is empty");
  const std::vector<std::string>& joints = train[0].motion.joint_names;
  Eigen::Index fdim = train[0].features.dim();
  auto check = [&](const LoadedPair& p) {
    if (p.motion.joint_names != joints)
      throw DataError("pair '" + p.id + "' has a different joint layout");
    if (p.features.dim() != fdim)
      throw DataError("pair '" + p.id + "' has a different feature dimension");
    if (p.features.fps != train[0].features.fps || p.motion.fps != train[0].motion.fps)
      throw DataError("pair '" + p.id + "' has a different frame rate");
  };
  for (const LoadedPair& p : train) check(p);
  for (const LoadedPair& p : val) check(p);
}

struct StandardizedData {
  std::vector<Eigen::MatrixXd> features;       // per pair, standardized
  std::vector<Eigen::MatrixXd> pose_velocity;  // per pair, standardized 6J
};

std::vector<WindowRef> window_refs(const StandardizedData& data,
                                   const std::vector<Eigen::MatrixXd>& targets) {
  std::vector<WindowRef> refs;
  for (std::size_t p = 0; p < data.features.size(); ++p)
    for (int t = 0; t < data.features[p].rows(); ++t)
      refs.push_back({&data.features[p], &targets[p], t});
  return refs;
}

}  // namespace

std::vector<nn::LayerSpec> aud2pose_arch(int in_dim, int hidden, int fc_layers,
                                         double dropout_p, int out_dim) {
  std::vector<nn::LayerSpec> specs;
  int cur = in_dim;
  for (int i = 0; i < fc_layers; ++i) {
    specs.push_back(nn::affine(cur, hidden));
    specs.push_back(nn::relu(hidden));
    specs.push_back(nn::batch_norm(hidden));
    specs.push_back(nn::dropout(hidden, dropout_p));
    cur = hidden;
  }
  specs.push_back(nn::gru(cur, hidden, true, false));
  specs.push_back(nn::linear_out(2 * hidden, out_dim));
  return specs;
}

std::vector<nn::LayerSpec> aud2motion_arch(int in_dim, int hidden, int fc_layers,
                                           double dropout_p, int out_dim) {
  std::vector<nn::LayerSpec> specs;
  int cur = in_dim;
  for (int i = 0; i < fc_layers; ++i) {
    specs.push_back(nn::affine(cur, hidden));
    specs.push_back(nn::relu(hidden));
    specs.push_back(nn::batch_norm(hidden));
    specs.push_back(nn::dropout(hidden, dropout_p));
    cur = hidden;
  }
  specs.push_back(nn::gru(cur, hidden, false, true));
  specs.push_back(nn::linear_out(hidden, out_dim));
  return specs;
}

std::vector<nn::LayerSpec> dae_arch(int frame_dim, int bottleneck) {
  return {nn::affine(frame_dim, bottleneck), nn::affine(bottleneck, frame_dim)};
}

GestureModel train_gesture_model(const std::vector<LoadedPair>& train,
                                 const std::vector<LoadedPair>& val,
                                 const ModelConfig& config) {
  validate_config(config);
  check_pairs(train, val);

  GestureModel model;
  model.kind = config.model_kind;
  model.config = config;
  model.joint_names = train[0].motion.joint_names;
  model.fps = train[0].motion.fps;

  std::vector<Eigen::MatrixXd> train_feats, train_pv, val_feats, val_pv;
  for (const LoadedPair& p : train) {
    train_feats.push_back(p.features.data);
    train_pv.push_back(pose_velocity_frames(p.motion.positions));
  }
  for (const LoadedPair& p : val) {
    val_feats.push_back(p.features.data);
    val_pv.push_back(pose_velocity_frames(p.motion.positions));
  }

  model.feature_stats = fit_standardizer(vstack(train_feats));
  model.motion_stats =
      fit_standardizer(vstack(train_pv), motion_stat_labels(model.joint_names));

  StandardizedData strain, sval;
  for (std::size_t i = 0; i < train_feats.size(); ++i) {
    strain.features.push_back(apply_standardizer(model.feature_stats, train_feats[i]));
    strain.pose_velocity.push_back(apply_standardizer(model.motion_stats, train_pv[i]));
  }
  for (std::size_t i = 0; i < val_feats.size(); ++i) {
    sval.features.push_back(apply_standardizer(model.feature_stats, val_feats[i]));
    sval.pose_velocity.push_back(apply_standardizer(model.motion_stats, val_pv[i]));
  }

  int pose_dim = 3 * static_cast<int>(model.joint_names.size());
  int in_dim = static_cast<int>(train_feats[0].cols());

  if (config.model_kind == "aud2pose" || config.model_kind == "aud2repr2pose") {
    // Targets: standardized [g, delta g] (or g alone without velocity); for
    // aud2repr2pose they pass through the frozen MotionE first.
    std::vector<Eigen::MatrixXd> train_targets, val_targets;
    int out_dim;
    if (config.model_kind == "aud2repr2pose") {
      TrainedDae dae = train_dae(vstack(strain.pose_velocity),
                                 sval.pose_velocity.empty()
                                     ? Eigen::MatrixXd(0, 2 * pose_dim)
                                     : vstack(sval.pose_velocity),
                                 config);
      model.motion_e = std::move(dae.motion_e);
      model.motion_d = std::move(dae.motion_d);
      model.dae_log = std::move(dae.log);
      for (const Eigen::MatrixXd& pv : strain.pose_velocity)
        train_targets.push_back(encode_motion(model.motion_e, pv));
      for (const Eigen::MatrixXd& pv : sval.pose_velocity)
        val_targets.push_back(encode_motion(model.motion_e, pv));
      out_dim = config.bottleneck;
    } else {
      for (const Eigen::MatrixXd& pv : strain.pose_velocity)
        train_targets.push_back(config.predict_velocity
                                    ? pv
                                    : Eigen::MatrixXd(pv.leftCols(pose_dim)));
      for (const Eigen::MatrixXd& pv : sval.pose_velocity)
        val_targets.push_back(config.predict_velocity
                                    ? pv
                                    : Eigen::MatrixXd(pv.leftCols(pose_dim)));
      out_dim = config.predict_velocity ? 2 * pose_dim : pose_dim;
    }

    model.net = nn::Network(
        aud2pose_arch(in_dim, config.hidden, config.fc_layers, config.dropout, out_dim),
        config.seed);

    std::vector<WindowRef> train_refs = window_refs(strain, train_targets);
    std::vector<WindowRef> val_refs = window_refs(sval, val_targets);
    auto assemble = [&](const std::vector<std::size_t>& order, std::size_t lo, std::size_t hi,
                        Eigen::MatrixXd& targets) {
      return assemble_window_batch(train_refs, order, lo, hi, config.C, targets);
    };
    auto assemble_val = [&](const std::vector<std::size_t>& order, std::size_t lo,
                            std::size_t hi, Eigen::MatrixXd& targets) {
      return assemble_window_batch(val_refs, order, lo, hi, config.C, targets);
    };
    model.log = run_epochs(model.net, train_refs, assemble, config.batch_size, config.epochs,
                           config.lr, config.seed + 1);
    model.net.set_mode(nn::Mode::Eval);
    model.log.val_mse = eval_mse(model.net, val_refs, assemble_val, 512);
    return model;
  }

  if (config.model_kind == "aud2motion") {
    std::vector<Eigen::MatrixXd> train_targets, val_targets;
    for (const Eigen::MatrixXd& pv : strain.pose_velocity)
      train_targets.push_back(config.predict_velocity
                                  ? pv
                                  : Eigen::MatrixXd(pv.leftCols(pose_dim)));
    for (const Eigen::MatrixXd& pv : sval.pose_velocity)
      val_targets.push_back(config.predict_velocity ? pv
                                                    : Eigen::MatrixXd(pv.leftCols(pose_dim)));
    int out_dim = config.predict_velocity ? 2 * pose_dim : pose_dim;

    std::vector<ChunkRef> train_refs, val_refs;
    for (std::size_t p = 0; p < strain.features.size(); ++p)
      for (auto [start, end] :
           chunk_ranges(static_cast<int>(strain.features[p].rows()), config.chunk_len))
        train_refs.push_back({&strain.features[p], &train_targets[p], start});
    for (std::size_t p = 0; p < sval.features.size(); ++p)
      for (auto [start, end] :
           chunk_ranges(static_cast<int>(sval.features[p].rows()), config.chunk_len))
        val_refs.push_back({&sval.features[p], &val_targets[p], start});
    if (train_refs.empty())
      throw DataError("training sequences shorter than one chunk of " +
                      std::to_string(config.chunk_len));

    model.net = nn::Network(
        aud2motion_arch(in_dim, config.hidden, config.fc_layers, config.dropout, out_dim),
        config.seed);

    auto assemble = [&](const std::vector<std::size_t>& order, std::size_t lo, std::size_t hi,
                        Eigen::MatrixXd& targets) {
      return assemble_chunk_batch(train_refs, order, lo, hi, config.chunk_len, targets);
    };
    auto assemble_val = [&](const std::vector<std::size_t>& order, std::size_t lo,
                            std::size_t hi, Eigen::MatrixXd& targets) {
      return assemble_chunk_batch(val_refs, order, lo, hi, config.chunk_len, targets);
    };
    model.log = run_epochs(model.net, train_refs, assemble, config.batch_size, config.epochs,
                           config.lr, config.seed + 1);
    model.net.set_mode(nn::Mode::Eval);
    model.log.val_mse = eval_mse(model.net, val_refs, assemble_val, 64);
    return model;
  }

  throw ConfigError("unknown model kind '" + config.model_kind + "'");
}

namespace {

nlohmann::json log_to_json(const TrainLog& log) {
  return {{"epoch_loss", log.epoch_loss}, {"val_mse", log.val_mse}};
}

TrainLog log_from_json(const nlohmann::json& j) {
  TrainLog log;
  log.epoch_loss = j.value("epoch_loss", std::vector<double>{});
  log.val_mse = j.value("val_mse", 0.0);
  return log;
}

nlohmann::json model_meta(const GestureModel& model) {
  nlohmann::json meta;
  meta["config"] = config_to_json(model.config);
  meta["feature_stats"] = stats_to_json(model.feature_stats);
  meta["motion_stats"] = stats_to_json(model.motion_stats);
  meta["joint_names"] = model.joint_names;
  meta["fps"] = model.fps;
  meta["log"] = log_to_json(model.log);
  if (model.has_dae()) meta["dae_log"] = log_to_json(model.dae_log);
  return meta;
}

void meta_into_model(const nlohmann::json& meta, GestureModel& model) {
  model.config = config_from_json(meta.at("config"));
  model.feature_stats = stats_from_json(meta.at("feature_stats"));
  model.motion_stats = stats_from_json(meta.at("motion_stats"));
  model.joint_names = meta.at("joint_names").get<std::vector<std::string>>();
  model.fps = meta.at("fps").get<int>();
  model.log = log_from_json(meta.value("log", nlohmann::json::object()));
  if (meta.contains("dae_log")) model.dae_log = log_from_json(meta.at("dae_log"));
}

}  // namespace

void save_gesture_model(const GestureModel& model, const std::string& dir) {
  fs::create_directories(dir);
  nlohmann::json meta = model_meta(model);
  if (model.has_dae()) {
    nn::save_checkpoint(model.net, "speech_e", meta, (fs::path(dir) / "speech_e.ckpt").string());
    nn::save_checkpoint(model.motion_e, "motion_e", nlohmann::json::object(),
                        (fs::path(dir) / "motion_e.ckpt").string());
    nn::save_checkpoint(model.motion_d, "motion_d", nlohmann::json::object(),
                        (fs::path(dir) / "motion_d.ckpt").string());
  } else {
    nn::save_checkpoint(model.net, model.kind, meta, (fs::path(dir) / "model.ckpt").string());
  }

  nlohmann::json log;
  log["log"] = log_to_json(model.log);
  if (model.has_dae()) log["dae_log"] = log_to_json(model.dae_log);
  std::ofstream out(fs::path(dir) / "train_log.json", std::ios::binary);
  if (!out) throw DataError("cannot write train log in '" + dir + "'");
  out << log.dump(1) << "\n";
}

GestureModel load_gesture_model(const std::string& dir) {
  GestureModel model;
  if (fs::exists(fs::path(dir) / "speech_e.ckpt")) {
    nn::Checkpoint speech = nn::load_checkpoint((fs::path(dir) / "speech_e.ckpt").string());
    nn::Checkpoint enc = nn::load_checkpoint((fs::path(dir) / "motion_e.ckpt").string());
    nn::Checkpoint dec = nn::load_checkpoint((fs::path(dir) / "motion_d.ckpt").string());
    model.kind = "aud2repr2pose";
    model.net = std::move(speech.net);
    model.motion_e = std::move(enc.net);
    model.motion_d = std::move(dec.net);
    meta_into_model(speech.meta, model);
  } else if (fs::exists(fs::path(dir) / "model.ckpt")) {
    nn::Checkpoint ckpt = nn::load_checkpoint((fs::path(dir) / "model.ckpt").string());
    model.kind = ckpt.model_kind;
    model.net = std::move(ckpt.net);
    meta_into_model(ckpt.meta, model);
  } else {
    throw DataError("no checkpoint found under '" + dir + "'");
  }
  return model;
}

}  // namespace gesturegen
