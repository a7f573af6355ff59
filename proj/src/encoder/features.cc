// src/encoder/features.cc

// Copyright 2026  The acmix Authors

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

#include "encoder/features.h"

#include <cmath>
#include <complex>

#include "base/errors.h"
#include "base/fft.h"
#include "base/parallel.h"

namespace acmix {

namespace {

constexpr double kLogFloor = 1e-10;

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

}  // namespace

LogMelExtractor::LogMelExtractor(const FeatureConfig& cfg) : cfg_(cfg) {
  if (cfg.n_mels < 8) throw ConfigError("features: n_mels must be >= 8");
  if (cfg.hop_ms > cfg.win_ms)
    throw ConfigError("features: hop_ms must be <= win_ms");
  win_ = cfg.win_ms * cfg.sample_rate / 1000;
  hop_ = cfg.hop_ms * cfg.sample_rate / 1000;
  n_fft_ = 1;
  while (n_fft_ < win_) n_fft_ <<= 1;

  window_.resize(win_);
  for (int i = 0; i < win_; ++i) {
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / win_);
  }
  twiddle_.resize(size_t(n_fft_) / 2);
  for (int k = 0; k < n_fft_ / 2; ++k) {
    const double ang = -2.0 * M_PI * k / n_fft_;
    twiddle_[size_t(k)] = {std::cos(ang), std::sin(ang)};
  }

  const int n_bins = n_fft_ / 2 + 1;
  const double nyquist = cfg.sample_rate / 2.0;
  const double mel_lo = 0.0, mel_hi = HzToMel(nyquist);
  std::vector<double> centers(cfg.n_mels + 2);
  for (int m = 0; m < cfg.n_mels + 2; ++m) {
    centers[m] = MelToHz(mel_lo + (mel_hi - mel_lo) * m / (cfg.n_mels + 1));
  }
  fb_.Resize(n_bins, cfg.n_mels);
  for (int k = 0; k < n_bins; ++k) {
    const double f = double(k) * cfg.sample_rate / n_fft_;
    for (int m = 1; m <= cfg.n_mels; ++m) {
      double w = 0.0;
      if (f >= centers[m - 1] && f <= centers[m]) {
        w = (f - centers[m - 1]) / (centers[m] - centers[m - 1]);
      } else if (f > centers[m] && f <= centers[m + 1]) {
        w = (centers[m + 1] - f) / (centers[m + 1] - centers[m]);
      }
      fb_(k, m - 1) = w;
    }
  }
}

namespace {

// Iterative radix-2 FFT with a precomputed twiddle table (w^k for k < n/2,
// indexed by stride). Same arithmetic order as base/fft.h up to the twiddle
// values themselves being table lookups.
void FftWithTable(std::vector<std::complex<double>>* xp,
                  const std::vector<std::complex<double>>& twiddle) {
  auto& x = *xp;
  const size_t n = x.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t stride = n / len;
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = twiddle[k * stride];
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

Mat LogMelExtractor::Compute(const std::vector<double>& samples) const {
  const int64_t len = int64_t(samples.size());
  if (len < win_) {
    throw DataError("features: input too short (" + std::to_string(len) +
                    " samples < one window of " + std::to_string(win_) + ")");
  }
  const int64_t T = 1 + (len - win_) / hop_;
  Mat out(T, cfg_.n_mels);
  const int n_bins = n_fft_ / 2 + 1;
  ParallelFor(T, [&](int64_t t) {
    std::vector<std::complex<double>> buf(static_cast<size_t>(n_fft_), 0.0);
    const double* x = samples.data() + t * hop_;
    for (int i = 0; i < win_; ++i) buf[i] = x[i] * window_[i];
    FftWithTable(&buf, twiddle_);
    double* row = out.RowPtr(t);
    for (int m = 0; m < cfg_.n_mels; ++m) row[m] = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      const double p = std::norm(buf[k]);
      const double* w = fb_.RowPtr(k);
      for (int m = 0; m < cfg_.n_mels; ++m) row[m] += p * w[m];
    }
    for (int m = 0; m < cfg_.n_mels; ++m) row[m] = std::log(row[m] + kLogFloor);
  });
  return out;
}

Mat ComputeLogMel(const std::vector<double>& samples,
                  const FeatureConfig& cfg) {
  return LogMelExtractor(cfg).Compute(samples);
}

}  // namespace acmix
