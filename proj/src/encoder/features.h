// src/encoder/features.h

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

#ifndef ACMIX_ENCODER_FEATURES_H_
#define ACMIX_ENCODER_FEATURES_H_

#include <complex>
#include <vector>

#include "base/mat.h"

namespace acmix {

struct FeatureConfig {
  int n_mels = 40;
  int win_ms = 25;
  int hop_ms = 10;
  int sample_rate = 16000;
};

// Log mel-filterbank features: Hann window, power spectrum via FFT, HTK mel
// triangles, log(energy + 1e-10). T = 1 + floor((len - win) / hop); inputs
// shorter than one window are a data error.
class LogMelExtractor {
 public:
  explicit LogMelExtractor(const FeatureConfig& cfg);

  Mat Compute(const std::vector<double>& samples) const;

  const Mat& filterbank() const { return fb_; }  // [n_bins x n_mels]
  int n_fft() const { return n_fft_; }

 private:
  FeatureConfig cfg_;
  int win_ = 0, hop_ = 0, n_fft_ = 0;
  std::vector<double> window_;
  std::vector<std::complex<double>> twiddle_;  // w_n^k for k < n/2
  Mat fb_;
};

Mat ComputeLogMel(const std::vector<double>& samples, const FeatureConfig& cfg);

}  // namespace acmix

#endif  // ACMIX_ENCODER_FEATURES_H_
