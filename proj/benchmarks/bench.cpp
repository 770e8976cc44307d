// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths: forward kinematics, feature extraction,
// recurrent forward passes, smoothing and metrics.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cmath>

#include "gesturegen/audio_features.hpp"
#include "gesturegen/bvh.hpp"
#include "gesturegen/metrics.hpp"
#include "gesturegen/motion.hpp"
#include "gesturegen/nn/network.hpp"
#include "gesturegen/postprocess.hpp"
#include "gesturegen/wav.hpp"

namespace gg = gesturegen;
namespace nn = gesturegen::nn;

namespace {

gg::Skeleton chain_skeleton(int joints) {
  using gg::Channel;
  gg::Skeleton sk;
  for (int j = 0; j < joints; ++j) {
    gg::Joint joint;
    joint.name = j == 0 ? "root" : "joint" + std::to_string(j);
    joint.parent = j - 1;
    joint.offset = j == 0 ? Eigen::Vector3d::Zero() : Eigen::Vector3d(0.0, 10.0, 0.0);
    if (j == 0)
      joint.channels = {Channel::Xposition, Channel::Yposition, Channel::Zposition,
                        Channel::Zrotation, Channel::Xrotation, Channel::Yrotation};
    else
      joint.channels = {Channel::Zrotation, Channel::Xrotation, Channel::Yrotation};
    sk.joints.push_back(std::move(joint));
  }
  sk.joints.back().has_end_site = true;
  sk.joints.back().end_site_offset = Eigen::Vector3d(0.0, 10.0, 0.0);
  return sk;
}

gg::AudioClip tone_clip(double seconds) {
  gg::AudioClip clip;
  clip.sample_rate = 16000;
  int n = static_cast<int>(seconds * clip.sample_rate);
  for (int i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / clip.sample_rate;
    clip.samples.push_back(0.4 * std::sin(2.0 * M_PI * 160.0 * t) +
                           0.2 * std::sin(2.0 * M_PI * 320.0 * t));
  }
  return clip;
}

gg::MotionSequence noisy_motion(int frames, int joints, uint64_t seed) {
  nn::Rng rng(seed);
  gg::MotionSequence m;
  m.fps = 20;
  m.positions.resize(frames, 3 * joints);
  for (int j = 0; j < joints; ++j) m.joint_names.push_back("j" + std::to_string(j));
  for (int t = 0; t < frames; ++t)
    for (int c = 0; c < 3 * joints; ++c) m.positions(t, c) = 10.0 * rng.gaussian();
  return m;
}

void BM_ForwardKinematics(benchmark::State& state) {
  gg::Skeleton sk = chain_skeleton(static_cast<int>(state.range(0)));
  std::vector<int> offsets;
  int at = 0;
  for (const gg::Joint& j : sk.joints) {
    offsets.push_back(at);
    at += static_cast<int>(j.channels.size());
  }
  nn::Rng rng(1);
  Eigen::RowVectorXd frame(at);
  for (int c = 0; c < at; ++c) frame(c) = rng.uniform(-60.0, 60.0);
  for (auto _ : state) benchmark::DoNotOptimize(gg::forward_kinematics(sk, offsets, frame));
}
BENCHMARK(BM_ForwardKinematics)->Arg(8)->Arg(32);

void BM_Mfcc(benchmark::State& state) {
  gg::AudioClip clip = tone_clip(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gg::mfcc(clip));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(clip.samples.size()));
}
BENCHMARK(BM_Mfcc)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_F0Contour(benchmark::State& state) {
  gg::AudioClip clip = tone_clip(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gg::f0_contour(clip));
}
BENCHMARK(BM_F0Contour)->Unit(benchmark::kMillisecond);

void BM_GruForward(benchmark::State& state) {
  int hidden = static_cast<int>(state.range(0));
  nn::Network net({nn::gru(26, hidden, true, false)}, 1);
  nn::Rng rng(2);
  int time = 61, batch = 32;
  Eigen::MatrixXd data(time * batch, 26);
  for (int r = 0; r < data.rows(); ++r)
    for (int c = 0; c < data.cols(); ++c) data(r, c) = rng.gaussian();
  nn::SeqBatch input(data, time, batch);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward_eval(input));
  state.SetItemsProcessed(state.iterations() * time * batch);
}
BENCHMARK(BM_GruForward)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OneEuro(benchmark::State& state) {
  gg::MotionSequence m = noisy_motion(1200, 8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gg::one_euro(m));
}
BENCHMARK(BM_OneEuro)->Unit(benchmark::kMicrosecond);

void BM_MovingAverage(benchmark::State& state) {
  gg::MotionSequence m = noisy_motion(1200, 8, 4);
  for (auto _ : state) benchmark::DoNotOptimize(gg::moving_average(m, 5));
}
BENCHMARK(BM_MovingAverage)->Unit(benchmark::kMicrosecond);

void BM_Ape(benchmark::State& state) {
  gg::MotionSequence a = noisy_motion(1200, 8, 5);
  gg::MotionSequence b = noisy_motion(1200, 8, 6);
  for (auto _ : state) benchmark::DoNotOptimize(gg::ape(a, b));
}
BENCHMARK(BM_Ape)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
