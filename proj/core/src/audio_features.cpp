// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/audio_features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include "gesturegen/errors.hpp"

namespace gesturegen {
namespace {

constexpr double kMelHigh = 8000.0;
constexpr int kMelFilters = 26;
constexpr int kSpecBands = 64;
constexpr double kSpecLow = 20.0;
constexpr double kF0Low = 60.0;
constexpr double kF0High = 400.0;
constexpr double kVoicingThreshold = 0.45;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& a) {
  std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * M_PI / static_cast<double>(len);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

int frame_samples(double seconds, int sample_rate) {
  return static_cast<int>(std::lround(seconds * sample_rate));
}

int frame_count_for(std::size_t n, int win, int hop) {
  if (n < static_cast<std::size_t>(win)) return 0;
  return static_cast<int>((n - static_cast<std::size_t>(win)) / static_cast<std::size_t>(hop)) + 1;
}

/// Triangular filterbank over power-spectrum bins. Each row is one filter,
/// normalized to unit weight sum so broadband input maps to the per-bin mean.
/// Bands too narrow to cover any bin fall back to the single nearest bin.
Eigen::MatrixXd triangle_bank(const std::vector<double>& edges_hz, int bins, double bin_hz) {
  int filters = static_cast<int>(edges_hz.size()) - 2;
  Eigen::MatrixXd bank = Eigen::MatrixXd::Zero(filters, bins);
  for (int m = 0; m < filters; ++m) {
    double lo = edges_hz[m], mid = edges_hz[m + 1], hi = edges_hz[m + 2];
    double sum = 0.0;
    for (int k = 0; k < bins; ++k) {
      double f = k * bin_hz;
      double w = 0.0;
      if (f > lo && f < mid)
        w = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        w = (hi - f) / (hi - mid);
      bank(m, k) = w;
      sum += w;
    }
    if (sum > 0.0) {
      bank.row(m) /= sum;
    } else {
      int nearest = static_cast<int>(std::clamp(std::lround(mid / bin_hz), long{0},
                                                static_cast<long>(bins - 1)));
      bank(m, nearest) = 1.0;
    }
  }
  return bank;
}

void check_signal(const AudioClip& signal) {
  if (signal.sample_rate <= 0) throw DataError("sample rate must be positive");
  for (double s : signal.samples)
    if (!std::isfinite(s)) throw DataError("audio contains non-finite samples");
}

}  // namespace

std::string feature_kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::Mfcc: return "mfcc";
    case FeatureKind::Spectrogram: return "spectrogram";
    case FeatureKind::Prosodic: return "prosodic";
    case FeatureKind::Combined: return "combined";
  }
  throw Error("invalid feature kind");
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "mfcc") return FeatureKind::Mfcc;
  if (s == "spectrogram") return FeatureKind::Spectrogram;
  if (s == "prosodic") return FeatureKind::Prosodic;
  if (s == "combined") return FeatureKind::Combined;
  throw DataError("unknown feature kind '" + s + "'");
}

Eigen::MatrixXd stft_power(const AudioClip& signal, double window_s, double hop_s) {
  check_signal(signal);
  if (!(hop_s > 0.0) || window_s < hop_s)
    throw DataError("need window_s >= hop_s > 0");
  int win = frame_samples(window_s, signal.sample_rate);
  int hop = frame_samples(hop_s, signal.sample_rate);
  if (win <= 0 || hop <= 0) throw DataError("window shorter than one sample");
  int frames = frame_count_for(signal.samples.size(), win, hop);
  if (frames <= 0)
    throw DataError("signal shorter than one analysis window (" + std::to_string(win) +
                    " samples)");

  std::size_t nfft = next_pow2(static_cast<std::size_t>(win));
  int bins = static_cast<int>(nfft / 2) + 1;

  std::vector<double> hann(win);
  for (int n = 0; n < win; ++n)
    hann[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / static_cast<double>(win));

  Eigen::MatrixXd out(frames, bins);
  std::vector<std::complex<double>> buf(nfft);
  for (int f = 0; f < frames; ++f) {
    std::size_t start = static_cast<std::size_t>(f) * hop;
    for (int n = 0; n < win; ++n)
      buf[n] = std::complex<double>(signal.samples[start + n] * hann[n], 0.0);
    std::fill(buf.begin() + win, buf.end(), std::complex<double>(0.0, 0.0));
    fft_inplace(buf);
    for (int k = 0; k < bins; ++k) out(f, k) = std::norm(buf[k]);
  }
  return out;
}

Eigen::MatrixXd mel_filterbank_energies(const AudioClip& signal) {
  if (signal.sample_rate < 16000)
    throw DataError("mfcc needs sample_rate >= 16000, got " +
                    std::to_string(signal.sample_rate));
  Eigen::MatrixXd power = stft_power(signal, 0.02, 0.01);
  int win = frame_samples(0.02, signal.sample_rate);
  std::size_t nfft = next_pow2(static_cast<std::size_t>(win));
  double bin_hz = static_cast<double>(signal.sample_rate) / static_cast<double>(nfft);

  std::vector<double> edges(kMelFilters + 2);
  double mel_hi = hz_to_mel(kMelHigh);
  for (int i = 0; i < kMelFilters + 2; ++i)
    edges[i] = mel_to_hz(mel_hi * i / (kMelFilters + 1));
  Eigen::MatrixXd bank = triangle_bank(edges, static_cast<int>(power.cols()), bin_hz);
  return power * bank.transpose();
}

FeatureSequence mfcc(const AudioClip& signal) {
  Eigen::MatrixXd energies = mel_filterbank_energies(signal);
  int frames = static_cast<int>(energies.rows());

  Eigen::MatrixXd logs(frames, kMelFilters);
  for (int f = 0; f < frames; ++f)
    for (int m = 0; m < kMelFilters; ++m)
      logs(f, m) = std::log(std::max(energies(f, m), kLogFloor));

  // Orthonormal DCT-II over the filter axis.
  Eigen::MatrixXd dct(kMelFilters, kMelFilters);
  for (int i = 0; i < kMelFilters; ++i) {
    double scale = std::sqrt((i == 0 ? 1.0 : 2.0) / kMelFilters);
    for (int m = 0; m < kMelFilters; ++m)
      dct(i, m) = scale * std::cos(M_PI * i * (m + 0.5) / kMelFilters);
  }

  FeatureSequence out;
  out.kind = FeatureKind::Mfcc;
  out.fps = 100;
  out.data = logs * dct.transpose();
  return out;
}

FeatureSequence spectrogram64(const AudioClip& signal) {
  if (signal.sample_rate < 16000)
    throw DataError("spectrogram64 needs sample_rate >= 16000 to represent 8 kHz, got " +
                    std::to_string(signal.sample_rate));
  Eigen::MatrixXd power = stft_power(signal, 0.046, 0.005);
  int win = frame_samples(0.046, signal.sample_rate);
  std::size_t nfft = next_pow2(static_cast<std::size_t>(win));
  double bin_hz = static_cast<double>(signal.sample_rate) / static_cast<double>(nfft);

  std::vector<double> edges(kSpecBands + 2);
  double ratio = kMelHigh / kSpecLow;
  for (int i = 0; i < kSpecBands + 2; ++i)
    edges[i] = kSpecLow * std::pow(ratio, static_cast<double>(i) / (kSpecBands + 1));
  Eigen::MatrixXd bank = triangle_bank(edges, static_cast<int>(power.cols()), bin_hz);

  Eigen::MatrixXd energies = power * bank.transpose();
  FeatureSequence out;
  out.kind = FeatureKind::Spectrogram;
  out.fps = 200;
  out.data.resize(energies.rows(), energies.cols());
  for (int f = 0; f < energies.rows(); ++f)
    for (int b = 0; b < energies.cols(); ++b)
      out.data(f, b) = std::log(std::max(energies(f, b), kLogFloor));
  return out;
}

std::vector<double> energy_contour(const AudioClip& signal, double hop_s) {
  check_signal(signal);
  int win = frame_samples(0.02, signal.sample_rate);
  int hop = frame_samples(hop_s, signal.sample_rate);
  if (hop <= 0) throw DataError("hop shorter than one sample");
  int frames = frame_count_for(signal.samples.size(), win, hop);
  std::vector<double> out(std::max(frames, 0));
  for (int f = 0; f < frames; ++f) {
    std::size_t start = static_cast<std::size_t>(f) * hop;
    double acc = 0.0;
    for (int n = 0; n < win; ++n) acc += signal.samples[start + n] * signal.samples[start + n];
    out[f] = std::sqrt(acc / win);
  }
  return out;
}

std::vector<double> f0_contour(const AudioClip& signal, double hop_s) {
  check_signal(signal);
  int win = frame_samples(0.04, signal.sample_rate);
  int hop = frame_samples(hop_s, signal.sample_rate);
  if (hop <= 0) throw DataError("hop shorter than one sample");
  int frames = frame_count_for(signal.samples.size(), win, hop);

  int lag_min = static_cast<int>(std::floor(signal.sample_rate / kF0High));
  int lag_max = std::min(static_cast<int>(std::ceil(signal.sample_rate / kF0Low)), win - 2);

  std::vector<double> out(std::max(frames, 0), 0.0);
  std::vector<double> frame(win), r(std::max(lag_max + 2, 0), 0.0);
  for (int f = 0; f < frames; ++f) {
    std::size_t start = static_cast<std::size_t>(f) * hop;
    double mean = 0.0;
    for (int n = 0; n < win; ++n) mean += signal.samples[start + n];
    mean /= win;
    for (int n = 0; n < win; ++n) frame[n] = signal.samples[start + n] - mean;

    // Normalized autocorrelation: r(tau) scaled by the energies of the two
    // overlapping segments so a stationary tone scores ~1 at its period.
    double best = 0.0;
    for (int tau = lag_min; tau <= lag_max + 1; ++tau) {
      double num = 0.0, e0 = 0.0, e1 = 0.0;
      for (int n = 0; n + tau < win; ++n) {
        num += frame[n] * frame[n + tau];
        e0 += frame[n] * frame[n];
        e1 += frame[n + tau] * frame[n + tau];
      }
      double denom = std::sqrt(e0 * e1);
      r[tau] = denom > 0.0 ? num / denom : 0.0;
      if (tau <= lag_max) best = std::max(best, r[tau]);
    }
    if (best < kVoicingThreshold) continue;

    // Take the shortest lag competitive with the global peak, then refine to
    // the local maximum. This avoids locking onto period multiples.
    int tau = lag_min;
    while (tau < lag_max && r[tau] < 0.97 * best) ++tau;
    while (tau < lag_max && r[tau + 1] > r[tau]) ++tau;

    double refined = tau;
    if (tau > lag_min && tau < lag_max + 1) {
      double a = r[tau - 1], b = r[tau], c = r[tau + 1];
      double denom = a - 2.0 * b + c;
      if (std::abs(denom) > 1e-12) {
        double delta = 0.5 * (a - c) / denom;
        if (std::abs(delta) <= 1.0) refined = tau + delta;
      }
    }
    double f0 = signal.sample_rate / refined;
    if (f0 >= kF0Low && f0 <= kF0High) out[f] = f0;
  }
  return out;
}

FeatureSequence prosodic_features(const AudioClip& signal) {
  std::vector<double> energy = energy_contour(signal, 0.005);
  std::vector<double> f0 = f0_contour(signal, 0.005);
  int frames = static_cast<int>(std::min(energy.size(), f0.size()));
  if (frames <= 0) throw DataError("signal too short for prosodic features");

  FeatureSequence out;
  out.kind = FeatureKind::Prosodic;
  out.fps = 200;
  out.data.resize(frames, 4);
  for (int t = 0; t < frames; ++t) {
    out.data(t, 0) = std::log(std::max(energy[t], kLogFloor)) - 3.0;
    out.data(t, 2) = std::max(std::log(f0[t] + 1.0) - 4.0, 0.0);
  }
  out.data(0, 1) = 0.0;
  out.data(0, 3) = 0.0;
  for (int t = 1; t < frames; ++t) {
    out.data(t, 1) = (out.data(t, 0) - out.data(t - 1, 0)) / 0.005;
    out.data(t, 3) = (out.data(t, 2) - out.data(t - 1, 2)) / 0.005;
  }
  return out;
}

FeatureSequence downsample_average(const FeatureSequence& f, int factor) {
  if (factor < 1) throw DataError("downsample factor must be >= 1");
  if (factor == 1) return f;
  int frames = f.frames() / factor;
  if (frames < 1)
    throw DataError("sequence of " + std::to_string(f.frames()) +
                    " frames too short for factor " + std::to_string(factor));
  if (f.fps % factor != 0)
    throw DataError("factor " + std::to_string(factor) + " does not divide fps " +
                    std::to_string(f.fps));
  FeatureSequence out;
  out.kind = f.kind;
  out.fps = f.fps / factor;
  out.data.resize(frames, f.data.cols());
  for (int k = 0; k < frames; ++k)
    out.data.row(k) = f.data.middleRows(k * factor, factor).colwise().mean();
  return out;
}

FeatureSequence concat_features(const std::vector<FeatureSequence>& parts) {
  if (parts.empty()) throw DataError("concat_features needs at least one input");
  if (parts.size() == 1) return parts[0];
  int fps = parts[0].fps;
  int frames = parts[0].frames();
  int dim = 0;
  for (const FeatureSequence& p : parts) {
    if (p.fps != fps)
      throw DataError("feature fps mismatch: " + std::to_string(p.fps) + " vs " +
                      std::to_string(fps));
    frames = std::min(frames, p.frames());
    dim += p.dim();
  }
  FeatureSequence out;
  out.kind = FeatureKind::Combined;
  out.fps = fps;
  out.data.resize(frames, dim);
  int col = 0;
  for (const FeatureSequence& p : parts) {
    out.data.middleCols(col, p.dim()) = p.data.topRows(frames);
    col += p.dim();
  }
  return out;
}

void write_feature_csv(const FeatureSequence& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "# kind=" << feature_kind_name(f.kind) << " fps=" << f.fps << " dim=" << f.dim()
      << "\n";
  std::ostringstream row;
  row.precision(17);
  for (int t = 0; t < f.frames(); ++t) {
    row.str("");
    for (int c = 0; c < f.dim(); ++c) {
      if (c) row << ",";
      row << f.data(t, c);
    }
    out << row.str() << "\n";
  }
  if (!out) throw DataError("failed writing '" + path + "'");
}

FeatureSequence read_feature_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file", 1);

  FeatureSequence f;
  int dim = -1;
  {
    std::istringstream hdr(line);
    std::string hash, field;
    hdr >> hash;
    if (hash != "#") throw ParseError(path + ": expected '# kind=... fps=... dim=...'", 1);
    while (hdr >> field) {
      std::size_t eq = field.find('=');
      if (eq == std::string::npos)
        throw ParseError(path + ": bad header field '" + field + "'", 1);
      std::string key = field.substr(0, eq), value = field.substr(eq + 1);
      try {
        if (key == "kind")
          f.kind = feature_kind_from_string(value);
        else if (key == "fps")
          f.fps = std::stoi(value);
        else if (key == "dim")
          dim = std::stoi(value);
        else
          throw ParseError(path + ": unknown header field '" + key + "'", 1);
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception&) {
        throw ParseError(path + ": bad header value '" + value + "'", 1);
      }
    }
  }
  if (f.fps <= 0 || dim <= 0) throw ParseError(path + ": header must set fps and dim", 1);

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(path + ": bad number '" + cell + "'", line_no);
      }
    }
    if (static_cast<int>(row.size()) != dim)
      throw ParseError(path + ": expected " + std::to_string(dim) + " values, got " +
                           std::to_string(row.size()),
                       line_no);
    rows.push_back(std::move(row));
  }
  f.data.resize(static_cast<int>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < dim; ++c) f.data(static_cast<int>(r), c) = rows[r][c];
  return f;
}

}  // namespace gesturegen
