// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gesturegen/audio_features.hpp"
#include "gesturegen/dataset/manifest.hpp"
#include "gesturegen/motion.hpp"

namespace gesturegen {

inline constexpr int kMotionFps = 20;

struct LoadedPair {
  std::string id;
  FeatureSequence features;  // 20 fps
  MotionSequence motion;     // 20 fps, hip-centered when the manifest names a hip
};

/// Breaks "mfcc+pros" style names into extractor kinds; accepts mfcc,
/// spectrogram/spec, prosodic/pros, combos joined by '+', and "all".
std::vector<FeatureKind> parse_feature_kinds(const std::string& name);

/// Dimensionality of the combined feature vector for a kind name.
int feature_dim(const std::string& name);

/// Extracts the requested features at 20 fps from an audio clip.
FeatureSequence extract_features_20fps(const AudioClip& clip, const std::string& feature_kind);

/// Loads one manifest entry: audio -> features at 20 fps, motion (BVH or
/// motion CSV by extension) -> global positions resampled to 20 fps and
/// hip-centered when the manifest names a hip joint; both truncated to the
/// common minimum length.
LoadedPair load_pair(const DatasetManifest& manifest, const ManifestEntry& entry,
                     const std::string& feature_kind);

/// All pairs of one split, in manifest order.
std::vector<LoadedPair> load_split(const DatasetManifest& manifest, const std::string& split,
                                   const std::string& feature_kind);

/// Joint-group name -> joint indices for a given joint layout.
std::map<std::string, std::vector<int>> resolve_joint_groups(const DatasetManifest& manifest,
                                                             const std::vector<std::string>& joint_names);

}  // namespace gesturegen
