// src/encoder/encoder.h

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

#ifndef ACMIX_ENCODER_ENCODER_H_
#define ACMIX_ENCODER_ENCODER_H_

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "base/mat.h"
#include "base/ndarray-io.h"
#include "encoder/features.h"

namespace acmix {

// Small trainable sequence encoder standing in for a pre-trained SSL model.
// Architecture: log-mel frames -> strided (x2) temporal downsampling with a
// fixed linear+tanh frontend -> n_layers identical residual blocks, each
// block being layer-norm followed by a recurrent (tanh) position-mixing
// sublayer added back to its input. The recurrent choice keeps per-frame
// compute linear in sequence length, which matters on small CPUs.
//
// The frontend is fixed at initialization (it plays the role of the frozen
// feature extractor); adaptation and fine-tuning only ever update the last-N
// residual blocks selected by SetTrainable.
struct EncoderConfig {
  int n_layers = 4;
  int d_model = 128;
  FeatureConfig feat;
  uint64_t seed = 0;
};

struct EncoderState {
  EncoderConfig cfg;
  // Canonical names: "frontend/w" [2*n_mels x d], "frontend/b" [1 x d];
  // per block i in 1..n_layers: "layer{i}/ln_g", "layer{i}/ln_b" [1 x d],
  // "layer{i}/wx", "layer{i}/wh" [d x d], "layer{i}/b" [1 x d].
  ArrayMap params;
  std::vector<bool> trainable;  // one flag per residual block

  // Mutators bump `version`; Encode re-checks parameter finiteness only when
  // it changes (single-writer training, concurrent readers).
  uint64_t version = 1;
  mutable std::atomic<uint64_t> finite_checked_version{0};

  EncoderState() = default;
  EncoderState(const EncoderState& o)
      : cfg(o.cfg), params(o.params), trainable(o.trainable),
        version(o.version) {}
  EncoderState& operator=(const EncoderState& o) {
    cfg = o.cfg;
    params = o.params;
    trainable = o.trainable;
    version = o.version;
    finite_checked_version = 0;
    return *this;
  }
};

EncoderState InitEncoder(const EncoderConfig& cfg);

// Marks exactly the final last_n blocks trainable. 0 <= last_n <= n_layers.
void SetTrainable(EncoderState* state, int last_n);

// 1-based index of the lowest trainable block; n_layers + 1 when all frozen.
int LowestTrainableLayer(const EncoderState& state);

struct EncoderLayerCache {
  Mat x_hat;                    // layer-norm normalized input
  std::vector<double> inv_std;  // per frame
  Mat y;                        // layer-norm output (RNN input)
  Mat r;                        // recurrent activations (tanh)
};

struct EncodeCache {
  int64_t t_out = 0;
  std::vector<EncoderLayerCache> layers;
};

// feats: [T x n_mels] from LogMelExtractor. Returns [ceil(T/2) x d_model].
// Deterministic given (state, feats). Throws NumericalError if parameters
// contain NaN/Inf.
Mat Encode(const EncoderState& state, const Mat& feats,
           EncodeCache* cache = nullptr);

// Frontend plus blocks 1..n_blocks (0 = frontend only), no cache. Used to
// precompute the frozen prefix once during fine-tuning.
Mat EncodeUpTo(const EncoderState& state, const Mat& feats, int n_blocks);

// Blocks first_block..last_block (-1 = n_layers) from a precomputed block
// input; fills cache->layers[l-1] for exactly those blocks.
Mat EncodeFrom(const EncoderState& state, const Mat& x_in, int first_block,
               EncodeCache* cache = nullptr, int last_block = -1);

// Backpropagates d_out (same shape as Encode output). Accumulates parameter
// gradients for trainable blocks into *grads (keys as in EncoderState) and
// stops propagating below the lowest trainable block. No-op when everything
// is frozen.
void EncodeBackward(const EncoderState& state, const EncodeCache& cache,
                    const Mat& d_out, ArrayMap* grads);

// Checkpoint container + JSON metadata sidecar ("<path>.meta.json").
// extra holds additional arrays saved alongside (spin/head/optim prefixes).
void SaveEncoderCheckpoint(const std::string& path, const EncoderState& state,
                           const ArrayMap& extra, int64_t step);
EncoderState LoadEncoderCheckpoint(const std::string& path,
                                   ArrayMap* extra = nullptr,
                                   int64_t* step = nullptr);

}  // namespace acmix

#endif  // ACMIX_ENCODER_ENCODER_H_
