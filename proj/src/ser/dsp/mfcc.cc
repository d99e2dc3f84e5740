// ser/dsp/mfcc.cc

// Copyright 2026  ser-duo contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ser/dsp/mfcc.h"

#include <cmath>
#include <complex>
#include <vector>

#include "ser/common/error.h"

namespace ser::dsp {

namespace {

constexpr int kRequiredRate = 16000;
constexpr double kPi = 3.14159265358979323846;

void check_config(const MfccConfig &cfg) {
  if (cfg.hop_ms <= 0 || cfg.frame_ms < cfg.hop_ms)
    throw StructuralError("mfcc: need frame_ms >= hop_ms > 0");
  if (cfg.num_ceps < 1 || cfg.num_ceps > cfg.mel_filters)
    throw StructuralError("mfcc: need 1 <= num_ceps <= mel_filters");
  if (!(cfg.log_floor > 0.0))
    throw StructuralError("mfcc: log_floor must be positive");
}

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>> &a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Triangular filters evaluated at FFT bin centers, HTK-style continuous
// weighting over [f_{j-1}, f_{j+1}].
std::vector<std::vector<double>> mel_filterbank(int num_filters, int nfft,
                                                int sample_rate) {
  const int bins = nfft / 2 + 1;
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(num_filters + 2);
  for (int j = 0; j < num_filters + 2; ++j)
    edges[j] = mel_to_hz(mel_hi * j / (num_filters + 1));
  std::vector<std::vector<double>> bank(
      num_filters, std::vector<double>(bins, 0.0));
  for (int j = 0; j < num_filters; ++j) {
    const double lo = edges[j], mid = edges[j + 1], hi = edges[j + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / nfft;
      if (f <= lo || f >= hi) continue;
      bank[j][k] = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
    }
  }
  return bank;
}

// Orthonormal DCT-II rows (num_ceps x num_filters).
std::vector<std::vector<double>> dct_rows(int num_ceps, int num_filters) {
  std::vector<std::vector<double>> rows(
      num_ceps, std::vector<double>(num_filters));
  for (int i = 0; i < num_ceps; ++i) {
    const double norm = i == 0 ? std::sqrt(1.0 / num_filters)
                               : std::sqrt(2.0 / num_filters);
    for (int j = 0; j < num_filters; ++j)
      rows[i][j] =
          norm * std::cos(kPi * i * (2 * j + 1) / (2.0 * num_filters));
  }
  return rows;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

numerics::Matrix frame_signal(const Waveform &w, const MfccConfig &cfg) {
  check_config(cfg);
  if (w.sample_rate <= 0)
    throw StructuralError("frame_signal: sample_rate must be positive");
  const int win = w.sample_rate * cfg.frame_ms / 1000;
  const int hop = w.sample_rate * cfg.hop_ms / 1000;
  if (win < 2 || hop < 1)
    throw StructuralError("frame_signal: frame/hop too short at this rate");
  const auto n = static_cast<long>(w.samples.size());
  if (n < win)
    throw DataError("frame_signal: waveform has " + std::to_string(n) +
                    " samples, needs at least " + std::to_string(win));
  const int num_frames = static_cast<int>((n - win) / hop) + 1;
  std::vector<double> window(win);
  for (int i = 0; i < win; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / (win - 1));
  numerics::Matrix frames(num_frames, win);
  for (int t = 0; t < num_frames; ++t) {
    const long start = static_cast<long>(t) * hop;
    for (int i = 0; i < win; ++i)
      frames(t, i) = w.samples[start + i] * window[i];
  }
  return frames;
}

FeatureMatrix mfcc(const Waveform &w, const MfccConfig &cfg) {
  check_config(cfg);
  if (w.sample_rate != kRequiredRate)
    throw DataError("mfcc: requires " + std::to_string(kRequiredRate) +
                    " Hz input, got " + std::to_string(w.sample_rate) +
                    " Hz (resample during ingestion)");
  for (double s : w.samples)
    if (!std::isfinite(s)) throw DataError("mfcc: non-finite sample");

  const numerics::Matrix frames = frame_signal(w, cfg);
  const int win = frames.cols();
  const int nfft = next_pow2(win);
  const int bins = nfft / 2 + 1;
  const auto bank = mel_filterbank(cfg.mel_filters, nfft, w.sample_rate);
  const auto dct = dct_rows(cfg.num_ceps, cfg.mel_filters);

  FeatureMatrix out;
  out.values = numerics::Matrix(frames.rows(), cfg.num_ceps);
  std::vector<std::complex<double>> buf(nfft);
  std::vector<double> power(bins), logmel(cfg.mel_filters);
  for (int t = 0; t < frames.rows(); ++t) {
    for (int i = 0; i < nfft; ++i)
      buf[i] = i < win ? std::complex<double>(frames(t, i), 0.0)
                       : std::complex<double>(0.0, 0.0);
    fft(buf);
    for (int k = 0; k < bins; ++k) power[k] = std::norm(buf[k]);
    for (int j = 0; j < cfg.mel_filters; ++j) {
      double e = 0.0;
      for (int k = 0; k < bins; ++k) e += bank[j][k] * power[k];
      logmel[j] = std::log(e > cfg.log_floor ? e : cfg.log_floor);
    }
    for (int i = 0; i < cfg.num_ceps; ++i) {
      double c = 0.0;
      for (int j = 0; j < cfg.mel_filters; ++j) c += dct[i][j] * logmel[j];
      out.values(t, i) = c;
    }
  }
  if (cfg.include_deltas) out = add_deltas(out);
  return out;
}

FeatureMatrix add_deltas(const FeatureMatrix &f) {
  const int frames = f.frames(), dim = f.dim();
  if (frames < 1) throw StructuralError("add_deltas: empty input");
  auto slope = [&](const numerics::Matrix &x, int t, int j) {
    double num = 0.0;
    for (int n = 1; n <= 2; ++n) {
      const int fwd = t + n < frames ? t + n : frames - 1;
      const int bwd = t - n >= 0 ? t - n : 0;
      num += n * (x(fwd, j) - x(bwd, j));
    }
    return num / 10.0;  // 2 * (1^2 + 2^2)
  };
  numerics::Matrix delta(frames, dim), delta2(frames, dim);
  for (int t = 0; t < frames; ++t)
    for (int j = 0; j < dim; ++j) delta(t, j) = slope(f.values, t, j);
  for (int t = 0; t < frames; ++t)
    for (int j = 0; j < dim; ++j) delta2(t, j) = slope(delta, t, j);
  FeatureMatrix out;
  out.values = numerics::Matrix(frames, 3 * dim);
  for (int t = 0; t < frames; ++t)
    for (int j = 0; j < dim; ++j) {
      out.values(t, j) = f.values(t, j);
      out.values(t, dim + j) = delta(t, j);
      out.values(t, 2 * dim + j) = delta2(t, j);
    }
  return out;
}

}  // namespace ser::dsp
