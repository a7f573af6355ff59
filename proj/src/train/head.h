// src/train/head.h

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

#ifndef ACMIX_TRAIN_HEAD_H_
#define ACMIX_TRAIN_HEAD_H_

#include <array>
#include <cstdint>
#include <vector>

#include "base/mat.h"
#include "base/ndarray-io.h"

namespace acmix {

// CTC prediction head: a stack of bidirectional LSTM layers over the encoder
// embeddings followed by a linear map to |alphabet|+1 logits.
struct HeadConfig {
  int in_dim = 128;
  int hidden = 48;      // per direction
  int num_layers = 2;
  int n_out = 28;       // classes including blank
  uint64_t seed = 0;
};

struct HeadState {
  HeadConfig cfg;
  // "head/l{i}/fw/wx" [in x 4H], ".../wh" [H x 4H], ".../b" [1 x 4H]; same
  // under bw; "head/out/w" [2H x n_out], "head/out/b" [1 x n_out].
  ArrayMap params;
};

HeadState InitHead(const HeadConfig& cfg);

struct LstmDirCache {
  Mat gates;   // [T x 4H], post-activation (i, f, g, o)
  Mat c;       // [T x H]
  Mat tanh_c;  // [T x H]
  Mat h;       // [T x H]
};

struct HeadCache {
  std::vector<Mat> inputs;                     // per layer input [T x in]
  std::vector<std::array<LstmDirCache, 2>> dirs;  // per layer {fw, bw}
  Mat concat;                                  // last layer [T x 2H]
};

// embeddings: [T x in_dim] -> logits [T x n_out].
Mat HeadForward(const HeadState& state, const Mat& embeddings,
                HeadCache* cache = nullptr);

// d_logits -> parameter grads into *grads; when d_embeddings != nullptr the
// gradient w.r.t. the head input is produced (full fine-tuning path).
void HeadBackward(const HeadState& state, const HeadCache& cache,
                  const Mat& d_logits, ArrayMap* grads, Mat* d_embeddings);

}  // namespace acmix

#endif  // ACMIX_TRAIN_HEAD_H_
