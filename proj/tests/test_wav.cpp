// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "gesturegen/errors.hpp"
#include "gesturegen/wav.hpp"
#include "helpers.hpp"

using namespace gesturegen;

TEST_CASE("wav 16-bit round trip stays within quantization error") {
  testutil::TempDir dir("wav_rt");
  AudioClip clip;
  clip.sample_rate = 16000;
  for (int i = 0; i < 1600; ++i)
    clip.samples.push_back(0.7 * std::sin(2.0 * M_PI * 220.0 * i / 16000.0));

  write_wav(clip, dir.file("a.wav"));
  AudioClip back = read_wav(dir.file("a.wav"));

  REQUIRE(back.sample_rate == 16000);
  REQUIRE(back.samples.size() == clip.samples.size());
  // Encoding rounds at a 32767 scale while decoding divides by 32768, so the
  // worst case is half a step of rounding plus one step of scale skew.
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    CHECK(std::abs(back.samples[i] - clip.samples[i]) <= 1.5 / 32768.0);
}

TEST_CASE("wav write clamps out-of-range samples") {
  testutil::TempDir dir("wav_clamp");
  AudioClip clip;
  clip.sample_rate = 8000;
  clip.samples = {2.0, -3.0, 0.5};
  write_wav(clip, dir.file("c.wav"));
  AudioClip back = read_wav(dir.file("c.wav"));
  CHECK(back.samples[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(back.samples[1] == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(back.samples[2] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("wav duration arithmetic") {
  AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.resize(8000, 0.0);
  CHECK(clip.duration() == doctest::Approx(0.5));
  CHECK(AudioClip{}.duration() == 0.0);
}

namespace {

void put_u32(std::ofstream& f, uint32_t v) { f.write(reinterpret_cast<char*>(&v), 4); }
void put_u16(std::ofstream& f, uint16_t v) { f.write(reinterpret_cast<char*>(&v), 2); }

// Minimal hand-rolled writer so the reader is tested against independent bytes.
void write_raw_wav(const std::string& path, uint16_t format, uint16_t channels,
                   uint32_t rate, uint16_t bits, const std::vector<char>& payload) {
  std::ofstream f(path, std::ios::binary);
  uint32_t data_size = static_cast<uint32_t>(payload.size());
  f.write("RIFF", 4);
  put_u32(f, 36 + data_size);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  put_u32(f, 16);
  put_u16(f, format);
  put_u16(f, channels);
  put_u32(f, rate);
  put_u32(f, rate * channels * bits / 8);
  put_u16(f, static_cast<uint16_t>(channels * bits / 8));
  put_u16(f, bits);
  f.write("data", 4);
  put_u32(f, data_size);
  f.write(payload.data(), payload.size());
}

}  // namespace

TEST_CASE("wav stereo averages to mono") {
  testutil::TempDir dir("wav_stereo");
  // Two frames of 16-bit stereo: (16384, -16384), (8192, 8192).
  std::vector<int16_t> pcm = {16384, -16384, 8192, 8192};
  std::vector<char> bytes(reinterpret_cast<char*>(pcm.data()),
                          reinterpret_cast<char*>(pcm.data()) + pcm.size() * 2);
  write_raw_wav(dir.file("s.wav"), 1, 2, 16000, 16, bytes);

  AudioClip clip = read_wav(dir.file("s.wav"));
  REQUIRE(clip.samples.size() == 2);
  CHECK(clip.samples[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(clip.samples[1] == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("wav rejects unsupported encodings") {
  testutil::TempDir dir("wav_bad");
  std::vector<char> bytes(8, 0);
  write_raw_wav(dir.file("b.wav"), 1, 1, 16000, 24, bytes);  // 24-bit PCM
  CHECK_THROWS_AS(read_wav(dir.file("b.wav")), DataError);

  write_raw_wav(dir.file("b2.wav"), 7, 1, 16000, 16, bytes);  // mu-law
  CHECK_THROWS_AS(read_wav(dir.file("b2.wav")), DataError);

  std::ofstream(dir.file("b3.wav")) << "not a wav at all";
  CHECK_THROWS_AS(read_wav(dir.file("b3.wav")), DataError);
  CHECK_THROWS_AS(read_wav(dir.file("missing.wav")), DataError);
}

TEST_CASE("wav reads 8-bit and float formats") {
  testutil::TempDir dir("wav_fmt");

  std::vector<char> u8 = {char(128), char(255), char(0)};
  write_raw_wav(dir.file("u8.wav"), 1, 1, 8000, 8, u8);
  AudioClip a = read_wav(dir.file("u8.wav"));
  CHECK(a.samples[0] == doctest::Approx(0.0));
  CHECK(a.samples[1] == doctest::Approx(127.0 / 128.0));
  CHECK(a.samples[2] == doctest::Approx(-1.0));

  std::vector<float> f32 = {0.25f, -0.5f};
  std::vector<char> bytes(reinterpret_cast<char*>(f32.data()),
                          reinterpret_cast<char*>(f32.data()) + 8);
  write_raw_wav(dir.file("f.wav"), 3, 1, 16000, 32, bytes);
  AudioClip b = read_wav(dir.file("f.wav"));
  CHECK(b.samples[0] == doctest::Approx(0.25));
  CHECK(b.samples[1] == doctest::Approx(-0.5));
}
