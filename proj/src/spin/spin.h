// src/spin/spin.h

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

#ifndef ACMIX_SPIN_SPIN_H_
#define ACMIX_SPIN_SPIN_H_

#include <cstdint>

#include "base/mat.h"
#include "base/ndarray-io.h"

namespace acmix {

// Swapped-prediction joint-embedding objective over K learnable clusters:
// frame embeddings are projected to unit vectors, scored against unit-norm
// prototypes (cosine / temperature), soft-assigned to clusters under an
// equal-partition constraint via Sinkhorn iterations, and each view predicts
// the other view's codes with cross-entropy. Codes are a stop-gradient.
struct SpinConfig {
  int n_clusters = 64;  // K
  int proj_dim = 64;
  double temp = 0.1;
  double sinkhorn_eps = 0.05;
  int sinkhorn_iters = 3;
  uint64_t seed = 0;
};

void ValidateSpinConfig(const SpinConfig& cfg);

struct SpinState {
  SpinConfig cfg;
  // "spin/w" [d_model x proj_dim], "spin/b" [1 x proj_dim],
  // "spin/prototypes" [K x proj_dim] with unit-norm rows.
  ArrayMap params;
};

SpinState InitSpin(const SpinConfig& cfg, int d_model);

// Re-normalizes prototype rows to unit length (after each optimizer step).
void RenormalizePrototypes(SpinState* state);

struct ProjectCache {
  Mat pre;                      // linear output before normalization
  std::vector<double> inv_norm; // per row; 0 marks the degenerate fallback
};

// Z = unit-row normalization of (E w + b). An exactly zero pre-activation row
// falls back to the basis vector e1 (gradient 0 there).
Mat Project(const SpinState& state, const Mat& embeddings,
            ProjectCache* cache = nullptr);

// dZ -> accumulates d spin/w, d spin/b into grads and returns d embeddings.
Mat ProjectBackward(const SpinState& state, const Mat& embeddings,
                    const ProjectCache& cache, const Mat& dz, ArrayMap* grads);

// S = Z prototypes^T / temp.
Mat Scores(const SpinState& state, const Mat& z);

// dS -> d prototypes (into grads) and dZ returned.
Mat ScoresBackward(const SpinState& state, const Mat& z, const Mat& ds,
                   ArrayMap* grads);

// Sinkhorn codes for exp(S / eps) with row sums 1 and column sums N/K,
// computed in the log domain; runs cfg.sinkhorn_iters alternating column/row
// normalizations and ends with a row normalization.
Mat AssignCodes(const Mat& scores, const SpinConfig& cfg);

// Max over columns of |colsum - N/K| / (N/K), measured after the final row
// normalization (used by tests and monitoring).
double CodeColumnResidual(const Mat& q);

struct SwappedLossResult {
  double loss = 0.0;
  Mat ds1, ds2;  // exact gradients w.r.t. the two score matrices
};

// loss = 1/2 * mean over frames of CE(q2, softmax(s1)) + CE(q1, softmax(s2)).
// q rows must sum to 1 within 1e-6.
SwappedLossResult SwappedLoss(const Mat& s1, const Mat& s2, const Mat& q1,
                              const Mat& q2);

}  // namespace acmix

#endif  // ACMIX_SPIN_SPIN_H_
