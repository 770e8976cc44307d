// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace gesturegen {

struct AudioClip {
  int sample_rate = 0;
  std::vector<double> samples;  // mono, in [-1, 1]

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Reads 8/16-bit PCM or 32-bit float WAV, mono or stereo (stereo is averaged
/// down to mono). Anything else is rejected with a DataError.
AudioClip read_wav(const std::string& path);

/// Writes 16-bit PCM mono. Samples are clamped to [-1, 1] before quantizing.
void write_wav(const AudioClip& clip, const std::string& path);

}  // namespace gesturegen
