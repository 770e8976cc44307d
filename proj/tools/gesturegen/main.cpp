// SPDX-License-Identifier: Apache-2.0
//
// gesturegen: speech-driven gesture generation pipeline.
//
//   gen-fixture       synthesize a correlated audio/motion dataset
//   extract-features  audio features for one WAV, as CSV
//   train             fit a model on a manifest's train split
//   generate          run a trained model on a WAV, motion CSV out
//   postprocess       smoothing filters over a motion CSV
//   evaluate          objective metrics of prediction vs ground truth
//   sweep             bottleneck capacity sweep for aud2repr2pose

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "gesturegen/audio_features.hpp"
#include "gesturegen/bvh.hpp"
#include "gesturegen/dataset/fixture.hpp"
#include "gesturegen/dataset/loader.hpp"
#include "gesturegen/dataset/manifest.hpp"
#include "gesturegen/errors.hpp"
#include "gesturegen/metrics.hpp"
#include "gesturegen/models/config.hpp"
#include "gesturegen/models/inference.hpp"
#include "gesturegen/models/sweep.hpp"
#include "gesturegen/models/training.hpp"
#include "gesturegen/motion.hpp"
#include "gesturegen/postprocess.hpp"
#include "gesturegen/wav.hpp"

namespace gg = gesturegen;
namespace fs = std::filesystem;

namespace {

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gg::DataError("cannot write '" + path.string() + "'");
  out << j.dump(1) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gg::ConfigError("cannot open config '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw gg::ConfigError(path + ": invalid JSON: " + e.what());
  }
}

/// Shared --config/--set resolution for the training-style commands. The
/// config file is flat JSON: model hyperparameters by their ModelConfig
/// names, plus optional "manifest", "out" and "histogram_bins" entries.
struct RunOptions {
  std::string config_path;
  std::string model_kind;
  std::string features;
  std::vector<std::string> sets;
  uint64_t seed = 0;
  bool seed_given = false;
  std::string manifest;
  std::string out;
  int histogram_bins = gg::kDefaultHistogramBins;

  void add_common(CLI::App* cmd, bool with_model) {
    cmd->add_option("--config", config_path, "RunConfig JSON file");
    if (with_model)
      cmd->add_option("--model", model_kind, "aud2pose | aud2motion | aud2repr2pose");
    cmd->add_option("--features", features,
                    "mfcc | spectrogram | prosodic | combos like mfcc+pros | all");
    cmd->add_option("--seed", seed, "random seed (required to train)")
        ->each([this](const std::string&) { seed_given = true; });
    cmd->add_option("--set", sets, "override any config key, e.g. --set epochs=5");
    cmd->add_option("--manifest", manifest, "dataset manifest JSON");
    cmd->add_option("--out", out, "output directory");
  }

  gg::ModelConfig resolve(bool require_seed) {
    bool have_seed = seed_given;
    gg::ModelConfig cfg;
    if (!config_path.empty()) {
      nlohmann::json j = read_json_file(config_path);
      cfg = gg::config_from_json(j);
      if (j.contains("seed")) have_seed = true;
      if (manifest.empty()) manifest = j.value("manifest", std::string());
      if (out.empty()) out = j.value("out", std::string());
      histogram_bins = j.value("histogram_bins", histogram_bins);
      if (!model_kind.empty() && model_kind != cfg.model_kind)
        gg::apply_override(cfg, "model_kind=" + model_kind);
    } else {
      cfg = gg::default_config(model_kind.empty() ? "aud2pose" : model_kind);
    }
    if (!features.empty()) cfg.feature_kind = features;
    if (seed_given) cfg.seed = seed;
    for (const std::string& kv : sets) {
      gg::apply_override(cfg, kv);
      if (kv.rfind("seed=", 0) == 0) have_seed = true;
    }
    gg::validate_config(cfg);
    if (require_seed && !have_seed)
      throw gg::ConfigError("training needs an explicit seed (--seed or config)");
    return cfg;
  }
};

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      dims.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw gg::ConfigError("bad --dims entry '" + part + "'");
    }
  }
  if (dims.empty()) throw gg::ConfigError("--dims needs at least one value");
  return dims;
}

nlohmann::json metrics_to_json(const gg::SequenceMetrics& m) {
  nlohmann::json h = nlohmann::json::object();
  for (const auto& [name, value] : m.hellinger_speed) h[name] = value;
  return {{"id", m.id},          {"ape", m.ape},
          {"mean_speed", m.mean_speed}, {"mean_accel", m.mean_accel},
          {"mean_jerk", m.mean_jerk},   {"hellinger_speed", h}};
}

int find_joint(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw gg::DataError("joint '" + name + "' not found in the motion header");
}

/// Motion CSV or BVH by extension. BVH goes through forward kinematics, gets
/// resampled to the model rate and, when a manifest names a hip joint,
/// hip-centered the same way the training loader does.
gg::MotionSequence read_motion_any(const std::string& path, const std::string& hip_joint) {
  if (fs::path(path).extension() != ".bvh") return gg::read_motion_csv(path);
  gg::MotionSequence motion = gg::to_motion_sequence(gg::parse_bvh(path));
  if (motion.fps != gg::kMotionFps) motion = gg::resample_motion(motion, gg::kMotionFps);
  if (!hip_joint.empty())
    motion = gg::hip_center(motion, find_joint(motion.joint_names, hip_joint));
  return motion;
}

// ---- commands -------------------------------------------------------------

void cmd_gen_fixture(const std::string& out, uint64_t seed, int joints, int train_minutes,
                     double val_seconds, int sample_rate) {
  if (out.empty()) throw gg::ConfigError("gen-fixture needs --out");
  if (joints < 2) throw gg::ConfigError("--joints must be at least 2");
  if (train_minutes < 1 || val_seconds <= 0.0)
    throw gg::ConfigError("--train-minutes and --val-seconds must be positive");

  gg::FixtureSpec base;
  base.seed = seed;
  base.joints = joints;
  base.sample_rate = sample_rate;

  std::vector<gg::FixtureClip> clips;
  for (int i = 0; i < train_minutes; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "train_%02d", i);
    clips.push_back({id, "train", 60.0});
  }
  clips.push_back({"val_00", "val", val_seconds});

  gg::DatasetManifest manifest = gg::generate_fixture_dataset(base, clips, out);
  std::cout << "wrote " << manifest.entries.size() << " clips under " << out << "\n";
}

void cmd_extract_features(const std::string& audio, const std::string& features,
                          const std::string& out) {
  if (audio.empty() || out.empty())
    throw gg::ConfigError("extract-features needs --audio and --out");
  gg::AudioClip clip = gg::read_wav(audio);
  gg::FeatureSequence f = gg::extract_features_20fps(clip, features);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  gg::write_feature_csv(f, out);
  std::cout << "wrote " << f.frames() << " frames x " << f.dim() << " dims to " << out << "\n";
}

void cmd_train(RunOptions& opts) {
  gg::ModelConfig cfg = opts.resolve(true);
  if (opts.manifest.empty()) throw gg::ConfigError("train needs --manifest");
  if (opts.out.empty()) throw gg::ConfigError("train needs --out");

  gg::DatasetManifest manifest = gg::load_manifest(opts.manifest);
  std::vector<gg::LoadedPair> train = gg::load_split(manifest, "train", cfg.feature_kind);
  std::vector<gg::LoadedPair> val = gg::load_split(manifest, "val", cfg.feature_kind);

  gg::GestureModel model = gg::train_gesture_model(train, val, cfg);
  gg::save_gesture_model(model, opts.out);

  nlohmann::json report;
  report["command"] = "train";
  report["config"] = gg::config_to_json(cfg);
  report["manifest"] = opts.manifest;
  report["train_pairs"] = train.size();
  report["val_pairs"] = val.size();
  if (!model.log.epoch_loss.empty()) report["final_train_loss"] = model.log.epoch_loss.back();
  report["val_mse"] = model.log.val_mse;
  if (model.has_dae()) report["dae_val_mse"] = model.dae_log.val_mse;
  write_json_file(fs::path(opts.out) / "report.json", report);

  std::cout << cfg.model_kind << ": " << model.log.epoch_loss.size()
            << " epochs, val mse " << model.log.val_mse << ", saved to " << opts.out << "\n";
}

void cmd_generate(const std::string& model_dir, const std::string& audio,
                  const std::string& out) {
  if (model_dir.empty() || audio.empty() || out.empty())
    throw gg::ConfigError("generate needs --model, --audio and --out");
  gg::GestureModel model = gg::load_gesture_model(model_dir);
  gg::AudioClip clip = gg::read_wav(audio);
  gg::FeatureSequence features = gg::extract_features_20fps(clip, model.config.feature_kind);
  gg::MotionSequence motion = gg::predict(model, features);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  gg::write_motion_csv(motion, out);
  std::cout << "wrote " << motion.frames() << " frames (" << model.kind << ") to " << out
            << "\n";
}

void cmd_postprocess(const std::string& in, const std::string& out, bool hip_center,
                     const std::string& hip_joint, bool use_one_euro,
                     const gg::OneEuroParams& params, bool use_ma, int ma_window) {
  if (in.empty() || out.empty()) throw gg::ConfigError("postprocess needs --in and --out");
  gg::MotionSequence motion = gg::read_motion_csv(in);

  gg::SmoothOptions smooth;
  smooth.hip_center = hip_center;
  if (hip_center && !hip_joint.empty())
    smooth.hip_joint = find_joint(motion.joint_names, hip_joint);
  smooth.one_euro = use_one_euro;
  smooth.one_euro_params = params;
  smooth.moving_average = use_ma;
  smooth.ma_window = ma_window;

  gg::MotionSequence result = gg::smooth_pipeline(motion, smooth);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  gg::write_motion_csv(result, out);
  std::cout << "wrote " << result.frames() << " smoothed frames to " << out << "\n";
}

void cmd_evaluate(const std::string& truth_path, const std::string& pred_path,
                  const std::string& manifest_path, int bins, const std::string& out) {
  if (truth_path.empty() || pred_path.empty())
    throw gg::ConfigError("evaluate needs --truth and --pred");

  std::string hip_joint;
  gg::DatasetManifest manifest;
  if (!manifest_path.empty()) {
    manifest = gg::load_manifest(manifest_path);
    hip_joint = manifest.hip_joint;
  }
  gg::MotionSequence truth = read_motion_any(truth_path, hip_joint);
  gg::MotionSequence pred = read_motion_any(pred_path, hip_joint);

  std::map<std::string, std::vector<int>> groups;
  if (!manifest_path.empty()) groups = gg::resolve_joint_groups(manifest, truth.joint_names);

  std::string id = fs::path(pred_path).stem().string();
  gg::SequenceMetrics metrics = gg::evaluate_sequence(id, truth, pred, groups, bins);

  nlohmann::json report;
  report["command"] = "evaluate";
  report["truth"] = truth_path;
  report["pred"] = pred_path;
  report["histogram_bins"] = bins;
  report["metrics"] = metrics_to_json(metrics);
  if (!out.empty()) write_json_file(out, report);

  std::cout << "ape " << metrics.ape << " cm, speed " << metrics.mean_speed << " cm/s, jerk "
            << metrics.mean_jerk << " cm/s^3, hellinger(all) "
            << metrics.hellinger_speed.at("all") << "\n";
}

void cmd_sweep(RunOptions& opts, const std::string& dims_text) {
  gg::ModelConfig cfg = opts.resolve(true);
  cfg.model_kind = "aud2repr2pose";  // the sweep only makes sense there
  if (opts.manifest.empty()) throw gg::ConfigError("sweep needs --manifest");
  std::vector<int> dims = parse_dims(dims_text);

  gg::DatasetManifest manifest = gg::load_manifest(opts.manifest);
  std::vector<gg::LoadedPair> train = gg::load_split(manifest, "train", cfg.feature_kind);
  std::vector<gg::LoadedPair> val = gg::load_split(manifest, "val", cfg.feature_kind);

  std::vector<gg::SweepRow> rows = gg::sweep_bottleneck(train, val, cfg, dims);

  std::cout << "dim\tdae_val_mse\tval_ape\tmean_jerk\n";
  for (const gg::SweepRow& row : rows)
    std::cout << row.dim << "\t" << row.dae_val_mse << "\t" << row.val_ape << "\t"
              << row.mean_jerk << "\n";

  if (!opts.out.empty()) {
    nlohmann::json jrows = nlohmann::json::array();
    for (const gg::SweepRow& row : rows)
      jrows.push_back({{"dim", row.dim},
                       {"dae_val_mse", row.dae_val_mse},
                       {"val_ape", row.val_ape},
                       {"mean_jerk", row.mean_jerk}});
    nlohmann::json report;
    report["command"] = "sweep";
    report["config"] = gg::config_to_json(cfg);
    report["manifest"] = opts.manifest;
    report["rows"] = jrows;
    write_json_file(fs::path(opts.out) / "sweep.json", report);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speech-driven gesture generation toolkit"};
  app.require_subcommand(1);

  // gen-fixture
  auto* fix = app.add_subcommand("gen-fixture", "synthesize a correlated dataset");
  std::string fix_out;
  uint64_t fix_seed = 1;
  int fix_joints = 8, fix_minutes = 3, fix_rate = 16000;
  double fix_val_seconds = 30.0;
  fix->add_option("--out", fix_out, "dataset directory")->required();
  fix->add_option("--seed", fix_seed, "base seed");
  fix->add_option("--joints", fix_joints, "chain length");
  fix->add_option("--train-minutes", fix_minutes, "minutes of training clips");
  fix->add_option("--val-seconds", fix_val_seconds, "length of the validation clip");
  fix->add_option("--sample-rate", fix_rate, "audio sample rate");

  // extract-features
  auto* ext = app.add_subcommand("extract-features", "audio features to CSV");
  std::string ext_audio, ext_features = "mfcc", ext_out;
  ext->add_option("--audio", ext_audio, "input WAV")->required();
  ext->add_option("--features", ext_features, "feature kind");
  ext->add_option("--out", ext_out, "output CSV")->required();

  // train
  auto* tr = app.add_subcommand("train", "fit a model on a manifest");
  RunOptions tr_opts;
  tr_opts.add_common(tr, true);

  // generate
  auto* gen = app.add_subcommand("generate", "motion from audio with a trained model");
  std::string gen_model, gen_audio, gen_out;
  gen->add_option("--model", gen_model, "trained model directory")->required();
  gen->add_option("--audio", gen_audio, "input WAV")->required();
  gen->add_option("--out", gen_out, "output motion CSV")->required();

  // postprocess
  auto* post = app.add_subcommand("postprocess", "smooth a motion CSV");
  std::string post_in, post_out, post_hip_joint;
  bool post_hip = false, post_euro = false, post_ma = false;
  gg::OneEuroParams euro;
  int post_ma_window = 5;
  post->add_option("--in", post_in, "input motion CSV")->required();
  post->add_option("--out", post_out, "output motion CSV")->required();
  post->add_flag("--hip-center", post_hip, "subtract the hip trajectory");
  post->add_option("--hip-joint", post_hip_joint, "hip joint name (default: first joint)");
  post->add_flag("--one-euro", post_euro, "One-Euro filter");
  post->add_option("--min-cutoff", euro.min_cutoff, "One-Euro minimum cutoff, Hz");
  post->add_option("--beta", euro.beta, "One-Euro speed coefficient");
  post->add_option("--d-cutoff", euro.d_cutoff, "One-Euro derivative cutoff, Hz");
  post->add_flag("--moving-average", post_ma, "moving-average filter");
  post->add_option("--ma-window", post_ma_window, "moving-average window (odd)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "metrics of prediction vs ground truth");
  std::string ev_truth, ev_pred, ev_manifest, ev_out;
  int ev_bins = gg::kDefaultHistogramBins;
  ev->add_option("--truth", ev_truth, "ground-truth motion CSV")->required();
  ev->add_option("--pred", ev_pred, "predicted motion CSV")->required();
  ev->add_option("--manifest", ev_manifest, "manifest providing joint groups");
  ev->add_option("--bins", ev_bins, "histogram bins");
  ev->add_option("--out", ev_out, "report JSON path");

  // sweep
  auto* sw = app.add_subcommand("sweep", "bottleneck capacity sweep");
  RunOptions sw_opts;
  std::string sw_dims = "8,16,32";
  sw_opts.add_common(sw, false);
  sw->add_option("--dims", sw_dims, "comma-separated bottleneck dims");

  try {
    app.parse(argc, argv);
    if (fix->parsed())
      cmd_gen_fixture(fix_out, fix_seed, fix_joints, fix_minutes, fix_val_seconds, fix_rate);
    else if (ext->parsed())
      cmd_extract_features(ext_audio, ext_features, ext_out);
    else if (tr->parsed())
      cmd_train(tr_opts);
    else if (gen->parsed())
      cmd_generate(gen_model, gen_audio, gen_out);
    else if (post->parsed())
      cmd_postprocess(post_in, post_out, post_hip, post_hip_joint, post_euro, euro, post_ma,
                      post_ma_window);
    else if (ev->parsed())
      cmd_evaluate(ev_truth, ev_pred, ev_manifest, ev_bins, ev_out);
    else if (sw->parsed())
      cmd_sweep(sw_opts, sw_dims);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const gg::ConfigError& e) {
    std::cerr << "gesturegen: " << e.what() << "\n";
    return 1;
  } catch (const gg::NumericalError& e) {
    std::cerr << "gesturegen: " << e.what() << "\n";
    return 3;
  } catch (const gg::Error& e) {
    std::cerr << "gesturegen: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gesturegen: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
