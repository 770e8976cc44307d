// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gesturegen/wav.hpp"

namespace gesturegen {

enum class FeatureKind { Mfcc, Spectrogram, Prosodic, Combined };

std::string feature_kind_name(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

struct FeatureSequence {
  FeatureKind kind = FeatureKind::Combined;
  int fps = 0;
  Eigen::MatrixXd data;  // frames x dim

  int frames() const { return static_cast<int>(data.rows()); }
  int dim() const { return static_cast<int>(data.cols()); }
};

/// Power floor applied before any log compression.
inline constexpr double kLogFloor = 1e-10;

/// Hann-windowed power spectrum. Frames start every hop and lie fully inside
/// the signal: frame count = floor((N - win) / hop) + 1. Each window is
/// zero-padded to the next power of two before the DFT; columns are
/// |X_k|^2 for k = 0..nfft/2.
Eigen::MatrixXd stft_power(const AudioClip& signal, double window_s, double hop_s);

/// 26 MFCCs at 100 fps: DCT-II over log mel-filterbank energies
/// (26 triangular filters spanning 0 Hz to 8 kHz), 20 ms window, 10 ms hop.
FeatureSequence mfcc(const AudioClip& signal);

/// Raw mel filterbank energies (before log and DCT), same framing as mfcc().
/// Exposed for inspection and tests.
Eigen::MatrixXd mel_filterbank_energies(const AudioClip& signal);

/// 64 log-spaced triangular bands over 20 Hz to 8 kHz, log-compressed,
/// 46 ms window, 5 ms hop (200 fps).
FeatureSequence spectrogram64(const AudioClip& signal);

/// Per-frame RMS, 20 ms window, hop_s hop.
std::vector<double> energy_contour(const AudioClip& signal, double hop_s = 0.005);

/// Autocorrelation F0 in Hz over a 40 ms window; 0 for unvoiced frames
/// (peak normalized autocorrelation below 0.45) and outside 60-400 Hz.
std::vector<double> f0_contour(const AudioClip& signal, double hop_s = 0.005);

/// [norm_energy, d(norm_energy), norm_pitch, d(norm_pitch)] at 200 fps.
/// norm_pitch = max(ln(F0+1) - 4, 0); norm_energy = ln(rms floored at eps) - 3;
/// derivatives are first differences over the hop, first frame 0.
FeatureSequence prosodic_features(const AudioClip& signal);

/// Output frame k = mean of input frames [k*factor, (k+1)*factor); remainder
/// frames are dropped; fps divides by factor.
FeatureSequence downsample_average(const FeatureSequence& f, int factor);

/// Column-wise concatenation. All inputs must share fps; rows are truncated
/// to the shortest input.
FeatureSequence concat_features(const std::vector<FeatureSequence>& parts);

/// Feature CSV: `# kind=<k> fps=<int> dim=<int>` header then one frame per row.
void write_feature_csv(const FeatureSequence& f, const std::string& path);
FeatureSequence read_feature_csv(const std::string& path);

}  // namespace gesturegen
