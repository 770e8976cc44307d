// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gesturegen/dataset/manifest.hpp"

namespace gesturegen {

/// Synthetic desk-scale stand-in for a gesture dataset. The audio is a sum of
/// amplitude-modulated harmonic tones in randomized voiced segments separated
/// by near-silence; the motion is a joint chain whose bend follows the
/// audio's energy envelope plus slow seeded drift, so speech and motion are
/// genuinely correlated. Deterministic per seed.
struct FixtureSpec {
  int joints = 8;
  double seconds = 60.0;
  uint64_t seed = 1;
  int sample_rate = 16000;
  /// Seeds the per-joint bend gains (the clip-invariant "style"). Clips of
  /// one dataset share it so the audio-to-motion mapping is consistent and
  /// learnable across clips; 0 means "same as seed".
  uint64_t style_seed = 0;
};

void generate_fixture(const FixtureSpec& spec, const std::string& wav_path,
                      const std::string& bvh_path);

struct FixtureClip {
  std::string id;
  std::string split;  // train | val | test
  double seconds = 0.0;
};

/// Writes audio/<id>.wav, motion/<id>.bvh and manifest.json under dir. Each
/// clip gets its own seed derived from the base seed and clip index.
DatasetManifest generate_fixture_dataset(const FixtureSpec& base,
                                         const std::vector<FixtureClip>& clips,
                                         const std::string& dir);

}  // namespace gesturegen
