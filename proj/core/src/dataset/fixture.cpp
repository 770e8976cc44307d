// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/dataset/fixture.hpp"

#include <cmath>
#include <filesystem>

#include "gesturegen/bvh.hpp"
#include "gesturegen/dataset/loader.hpp"
#include "gesturegen/errors.hpp"
#include "gesturegen/nn/rng.hpp"
#include "gesturegen/wav.hpp"

namespace gesturegen {
namespace {

namespace fs = std::filesystem;
using nn::Rng;

/// Slow sinusoidal drift with a seeded period (seconds) and phase.
struct Drift {
  double amplitude, period, phase;

  Drift(Rng& rng, double amp_lo, double amp_hi, double period_lo, double period_hi)
      : amplitude(rng.uniform(amp_lo, amp_hi)),
        period(rng.uniform(period_lo, period_hi)),
        phase(rng.uniform(0.0, 2.0 * M_PI)) {}

  double at(double seconds) const {
    return amplitude * std::sin(2.0 * M_PI * seconds / period + phase);
  }
};

std::vector<double> synthesize_audio(const FixtureSpec& spec, Rng& rng) {
  std::size_t total = static_cast<std::size_t>(std::llround(spec.seconds * spec.sample_rate));
  std::vector<double> samples(total, 0.0);
  int ramp = spec.sample_rate / 100;  // 10 ms fade at segment edges

  std::size_t pos = 0;
  bool voiced = true;  // lead with a tone so every clip has voiced content
  while (pos < total) {
    double seg_seconds = voiced ? rng.uniform(1.0, 2.5) : rng.uniform(0.3, 0.8);
    std::size_t seg =
        std::min(total - pos, static_cast<std::size_t>(std::llround(seg_seconds * spec.sample_rate)));
    if (voiced) {
      double f0 = rng.uniform(110.0, 220.0);
      double fm = rng.uniform(0.5, 1.2);
      double phase_m = rng.uniform(0.0, 2.0 * M_PI);
      for (std::size_t i = 0; i < seg; ++i) {
        double t = static_cast<double>(i) / spec.sample_rate;
        double trem = (1.0 + 0.6 * std::sin(2.0 * M_PI * fm * t + phase_m)) / 1.6;
        double tone = (std::sin(2.0 * M_PI * f0 * t) + 0.5 * std::sin(4.0 * M_PI * f0 * t) +
                       0.3 * std::sin(6.0 * M_PI * f0 * t)) /
                      1.8;
        double fade = 1.0;
        if (i < static_cast<std::size_t>(ramp)) fade = static_cast<double>(i) / ramp;
        std::size_t left = seg - 1 - i;
        if (left < static_cast<std::size_t>(ramp))
          fade = std::min(fade, static_cast<double>(left) / ramp);
        samples[pos + i] = 0.25 * trem * tone * fade;
      }
    } else {
      for (std::size_t i = 0; i < seg; ++i) samples[pos + i] = 0.02 * rng.gaussian();
    }
    pos += seg;
    voiced = !voiced;
  }
  return samples;
}

/// Audio energy at the motion rate: RMS per 1/fps block, lightly smoothed and
/// peak-normalized to [0, 1].
std::vector<double> motion_rate_envelope(const std::vector<double>& samples, int sample_rate,
                                         int frames) {
  int block = sample_rate / kMotionFps;
  std::vector<double> env(frames, 0.0);
  for (int k = 0; k < frames; ++k) {
    double acc = 0.0;
    std::size_t start = static_cast<std::size_t>(k) * block;
    for (int i = 0; i < block; ++i) {
      double s = start + i < samples.size() ? samples[start + i] : 0.0;
      acc += s * s;
    }
    env[k] = std::sqrt(acc / block);
  }

  // Wide enough that the motion has no spectral content a 5-frame moving
  // average would remove; prediction jitter sits above that band.
  std::vector<double> smooth(frames);
  double peak = 0.0;
  for (int k = 0; k < frames; ++k) {
    int lo = std::max(0, k - 3), hi = std::min(frames - 1, k + 3);
    double acc = 0.0;
    for (int i = lo; i <= hi; ++i) acc += env[i];
    smooth[k] = acc / (hi - lo + 1);
    peak = std::max(peak, smooth[k]);
  }
  if (peak > 0.0)
    for (double& v : smooth) v /= peak;
  return smooth;
}

BvhData build_motion(const FixtureSpec& spec, const std::vector<double>& envelope, Rng& rng,
                     Rng& style_rng) {
  int frames = static_cast<int>(envelope.size());
  BvhData bvh;
  bvh.frame_time = 1.0 / kMotionFps;

  Skeleton& sk = bvh.skeleton;
  for (int j = 0; j < spec.joints; ++j) {
    Joint joint;
    joint.name = j == 0 ? "root" : "joint" + std::to_string(j);
    joint.parent = j - 1;
    joint.offset = j == 0 ? Eigen::Vector3d::Zero() : Eigen::Vector3d(0.0, 10.0, 0.0);
    if (j == 0)
      joint.channels = {Channel::Xposition, Channel::Yposition, Channel::Zposition,
                        Channel::Zrotation, Channel::Xrotation, Channel::Yrotation};
    else
      joint.channels = {Channel::Zrotation, Channel::Xrotation, Channel::Yrotation};
    if (j == spec.joints - 1) {
      joint.has_end_site = true;
      joint.end_site_offset = Eigen::Vector3d(0.0, 10.0, 0.0);
    }
    sk.joints.push_back(joint);
  }

  bvh.channel_offset.resize(spec.joints);
  int offset = 0;
  for (int j = 0; j < spec.joints; ++j) {
    bvh.channel_offset[j] = offset;
    offset += static_cast<int>(sk.joints[j].channels.size());
  }

  // Drift stays small next to the envelope-driven bend: the bend is what a
  // speech-conditioned model can learn, the drift is its noise floor.
  Drift root_x(rng, 1.0, 2.0, 8.0, 16.0), root_z(rng, 1.0, 2.0, 8.0, 16.0);
  Drift root_rz(rng, 0.5, 1.5, 10.0, 18.0), root_rx(rng, 0.5, 1.5, 10.0, 18.0),
      root_ry(rng, 0.5, 1.5, 10.0, 18.0);

  struct JointMotion {
    double gain;
    Drift dz, dx, dy;
  };
  std::vector<JointMotion> joints_motion;
  for (int j = 1; j < spec.joints; ++j) {
    // Gains come from the style stream, drift from the clip stream.
    double gain = style_rng.uniform(20.0, 40.0) * (style_rng.uniform() < 0.5 ? -1.0 : 1.0);
    joints_motion.push_back({gain,
                             Drift(rng, 1.0, 2.0, 7.0, 15.0),
                             Drift(rng, 0.5, 1.0, 7.0, 15.0),
                             Drift(rng, 0.5, 1.0, 7.0, 15.0)});
  }

  bvh.frames.resize(frames, offset);
  for (int k = 0; k < frames; ++k) {
    double t = static_cast<double>(k) / kMotionFps;
    bvh.frames(k, 0) = root_x.at(t);
    bvh.frames(k, 1) = 0.0;
    bvh.frames(k, 2) = root_z.at(t);
    bvh.frames(k, 3) = root_rz.at(t);
    bvh.frames(k, 4) = root_rx.at(t);
    bvh.frames(k, 5) = root_ry.at(t);
    for (int j = 1; j < spec.joints; ++j) {
      const JointMotion& jm = joints_motion[static_cast<std::size_t>(j - 1)];
      int base = bvh.channel_offset[j];
      bvh.frames(k, base + 0) = jm.gain * envelope[k] + jm.dz.at(t);
      bvh.frames(k, base + 1) = jm.dx.at(t);
      bvh.frames(k, base + 2) = jm.dy.at(t);
    }
  }
  return bvh;
}

}  // namespace

void generate_fixture(const FixtureSpec& spec, const std::string& wav_path,
                      const std::string& bvh_path) {
  if (spec.joints < 2) throw ConfigError("fixture needs at least 2 joints");
  if (spec.seconds <= 0.0) throw ConfigError("fixture duration must be positive");
  if (spec.sample_rate < 16000)
    throw ConfigError("fixture sample rate must be at least 16000");

  Rng rng(spec.seed);
  Rng style_rng(spec.style_seed ? spec.style_seed : spec.seed);
  std::vector<double> samples = synthesize_audio(spec, rng);

  AudioClip clip;
  clip.sample_rate = spec.sample_rate;
  clip.samples = samples;
  write_wav(clip, wav_path);

  int frames = static_cast<int>(std::llround(spec.seconds * kMotionFps));
  std::vector<double> envelope = motion_rate_envelope(samples, spec.sample_rate, frames);
  write_bvh(build_motion(spec, envelope, rng, style_rng), bvh_path);
}

DatasetManifest generate_fixture_dataset(const FixtureSpec& base,
                                         const std::vector<FixtureClip>& clips,
                                         const std::string& dir) {
  fs::create_directories(fs::path(dir) / "audio");
  fs::create_directories(fs::path(dir) / "motion");

  DatasetManifest manifest;
  manifest.base_dir = dir;
  manifest.hip_joint = "root";
  manifest.joint_groups["distal"] = {"joint" + std::to_string(base.joints - 2),
                                     "joint" + std::to_string(base.joints - 1)};
  manifest.joint_groups["proximal"] = {"joint1", "joint2"};

  uint64_t clip_seed = base.seed;
  for (const FixtureClip& clip : clips) {
    FixtureSpec spec = base;
    spec.seconds = clip.seconds;
    spec.seed = ++clip_seed;
    spec.style_seed = base.style_seed ? base.style_seed : base.seed;
    std::string wav_rel = "audio/" + clip.id + ".wav";
    std::string bvh_rel = "motion/" + clip.id + ".bvh";
    generate_fixture(spec, (fs::path(dir) / wav_rel).generic_string(),
                     (fs::path(dir) / bvh_rel).generic_string());
    manifest.entries.push_back({clip.id, wav_rel, bvh_rel, clip.split});
  }

  save_manifest(manifest, (fs::path(dir) / "manifest.json").generic_string());
  return manifest;
}

}  // namespace gesturegen
