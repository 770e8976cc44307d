// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/dataset/loader.hpp"

#include <algorithm>

#include "gesturegen/bvh.hpp"
#include "gesturegen/errors.hpp"
#include "gesturegen/wav.hpp"

namespace gesturegen {
namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

FeatureKind kind_from_token(const std::string& token) {
  if (token == "mfcc") return FeatureKind::Mfcc;
  if (token == "spectrogram" || token == "spec") return FeatureKind::Spectrogram;
  if (token == "prosodic" || token == "pros") return FeatureKind::Prosodic;
  throw ConfigError("unknown feature kind '" + token + "'");
}

}  // namespace

std::vector<FeatureKind> parse_feature_kinds(const std::string& name) {
  if (name.empty()) throw ConfigError("empty feature kind");
  if (name == "all")
    return {FeatureKind::Mfcc, FeatureKind::Spectrogram, FeatureKind::Prosodic};
  std::vector<FeatureKind> kinds;
  std::string token;
  for (char c : name + "+") {
    if (c == '+') {
      if (token.empty()) throw ConfigError("malformed feature kind '" + name + "'");
      kinds.push_back(kind_from_token(token));
      token.clear();
    } else {
      token += c;
    }
  }
  for (std::size_t i = 0; i < kinds.size(); ++i)
    for (std::size_t k = i + 1; k < kinds.size(); ++k)
      if (kinds[i] == kinds[k])
        throw ConfigError("feature kind '" + name + "' repeats a component");
  return kinds;
}

int feature_dim(const std::string& name) {
  int dim = 0;
  for (FeatureKind k : parse_feature_kinds(name)) {
    switch (k) {
      case FeatureKind::Mfcc: dim += 26; break;
      case FeatureKind::Spectrogram: dim += 64; break;
      case FeatureKind::Prosodic: dim += 4; break;
      default: throw ConfigError("feature kind cannot include 'combined'");
    }
  }
  return dim;
}

FeatureSequence extract_features_20fps(const AudioClip& clip, const std::string& feature_kind) {
  std::vector<FeatureSequence> parts;
  for (FeatureKind k : parse_feature_kinds(feature_kind)) {
    FeatureSequence f;
    switch (k) {
      case FeatureKind::Mfcc: f = mfcc(clip); break;
      case FeatureKind::Spectrogram: f = spectrogram64(clip); break;
      case FeatureKind::Prosodic: f = prosodic_features(clip); break;
      default: throw ConfigError("feature kind cannot include 'combined'");
    }
    if (f.fps % kMotionFps != 0)
      throw DataError("feature rate " + std::to_string(f.fps) +
                      " fps is not an integer multiple of " + std::to_string(kMotionFps));
    parts.push_back(downsample_average(f, f.fps / kMotionFps));
  }
  return concat_features(parts);
}

LoadedPair load_pair(const DatasetManifest& manifest, const ManifestEntry& entry,
                     const std::string& feature_kind) {
  LoadedPair pair;
  pair.id = entry.id;

  AudioClip clip = read_wav(manifest.resolve(entry.audio_path));
  pair.features = extract_features_20fps(clip, feature_kind);

  std::string motion_file = manifest.resolve(entry.motion_path);
  MotionSequence motion;
  if (ends_with(motion_file, ".bvh"))
    motion = to_motion_sequence(parse_bvh(motion_file));
  else
    motion = read_motion_csv(motion_file);
  if (motion.fps != kMotionFps) motion = resample_motion(motion, kMotionFps);

  if (!manifest.hip_joint.empty()) {
    int hip = -1;
    for (int j = 0; j < motion.joints(); ++j)
      if (motion.joint_names[j] == manifest.hip_joint) hip = j;
    if (hip < 0)
      throw DataError("entry '" + entry.id + "': hip joint '" + manifest.hip_joint +
                      "' not in motion file");
    motion = hip_center(motion, hip);
  }

  int frames = std::min(pair.features.frames(), motion.frames());
  if (frames == 0) throw DataError("entry '" + entry.id + "' has no overlapping frames");
  pair.features.data.conservativeResize(frames, Eigen::NoChange);
  motion.positions.conservativeResize(frames, Eigen::NoChange);
  pair.motion = std::move(motion);
  return pair;
}

std::vector<LoadedPair> load_split(const DatasetManifest& manifest, const std::string& split,
                                   const std::string& feature_kind) {
  std::vector<LoadedPair> out;
  for (const ManifestEntry* e : manifest.split(split))
    out.push_back(load_pair(manifest, *e, feature_kind));
  return out;
}

std::map<std::string, std::vector<int>> resolve_joint_groups(
    const DatasetManifest& manifest, const std::vector<std::string>& joint_names) {
  std::map<std::string, std::vector<int>> out;
  for (const auto& [group, names] : manifest.joint_groups) {
    std::vector<int> indices;
    for (const std::string& name : names) {
      auto it = std::find(joint_names.begin(), joint_names.end(), name);
      if (it == joint_names.end())
        throw DataError("joint group '" + group + "' names unknown joint '" + name + "'");
      indices.push_back(static_cast<int>(it - joint_names.begin()));
    }
    out[group] = std::move(indices);
  }
  return out;
}

}  // namespace gesturegen
