// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "gesturegen/errors.hpp"

namespace gesturegen {
namespace {

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& s, uint32_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>((v >> 8) & 0xff);
  s += static_cast<char>((v >> 16) & 0xff);
  s += static_cast<char>((v >> 24) & 0xff);
}

void put_u16(std::string& s, uint16_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>((v >> 8) & 0xff);
}

double decode_sample(const unsigned char* p, uint16_t format, uint16_t bits) {
  if (format == 3) {  // IEEE float
    float f;
    std::memcpy(&f, p, 4);
    return static_cast<double>(f);
  }
  if (bits == 8) return (static_cast<int>(p[0]) - 128) / 128.0;  // 8-bit PCM is unsigned
  int16_t v = static_cast<int16_t>(p[0] | (p[1] << 8));
  return v / 32768.0;
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open WAV file '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const unsigned char* p = reinterpret_cast<const unsigned char*>(data.data());
  std::size_t n = data.size();

  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw DataError("'" + path + "' is not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const unsigned char* pcm = nullptr;
  uint32_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const unsigned char* chunk = p + pos;
    uint32_t size = read_u32(chunk + 4);
    const unsigned char* body = chunk + 8;
    if (pos + 8 + size > n) throw DataError("'" + path + "': truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw DataError("'" + path + "': fmt chunk too small");
      format = read_u16(body);
      channels = read_u16(body + 2);
      sample_rate = read_u32(body + 4);
      bits = read_u16(body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm = body;
      pcm_bytes = size;
    }
    pos += 8 + size + (size & 1);  // chunks are word aligned
  }

  if (!have_fmt) throw DataError("'" + path + "': missing fmt chunk");
  if (!pcm) throw DataError("'" + path + "': missing data chunk");
  bool supported = (format == 1 && (bits == 8 || bits == 16)) || (format == 3 && bits == 32);
  if (!supported)
    throw DataError("'" + path + "': unsupported WAV encoding (format " + std::to_string(format) +
                    ", " + std::to_string(bits) + " bits); need 8/16-bit PCM or 32-bit float");
  if (channels < 1 || channels > 2)
    throw DataError("'" + path + "': need mono or stereo, got " + std::to_string(channels) +
                    " channels");
  if (sample_rate == 0) throw DataError("'" + path + "': zero sample rate");

  uint32_t bytes_per_sample = bits / 8;
  uint32_t stride = bytes_per_sample * channels;
  std::size_t count = pcm_bytes / stride;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  clip.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (uint16_t ch = 0; ch < channels; ++ch)
      acc += decode_sample(pcm + i * stride + ch * bytes_per_sample, format, bits);
    clip.samples[i] = acc / channels;
  }
  return clip;
}

void write_wav(const AudioClip& clip, const std::string& path) {
  if (clip.sample_rate <= 0) throw DataError("sample rate must be positive");
  uint32_t pcm_bytes = static_cast<uint32_t>(clip.samples.size() * 2);

  std::string out;
  out.reserve(44 + pcm_bytes);
  out += "RIFF";
  put_u32(out, 36 + pcm_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<uint32_t>(clip.sample_rate) * 2);  // byte rate
  put_u16(out, 2);                                            // block align
  put_u16(out, 16);
  out += "data";
  put_u32(out, pcm_bytes);
  for (double s : clip.samples) {
    double clamped = std::clamp(s, -1.0, 1.0);
    int v = static_cast<int>(std::lround(clamped * 32767.0));
    put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("failed writing '" + path + "'");
}

}  // namespace gesturegen
