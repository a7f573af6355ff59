// src/ctc/ctc-loss.h

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

#ifndef ACMIX_CTC_CTC_LOSS_H_
#define ACMIX_CTC_CTC_LOSS_H_

#include <vector>

#include "base/mat.h"

namespace acmix {

struct CtcLossResult {
  double loss = 0.0;    // -log P(labels | log_probs); +inf when infeasible
  Mat grad_logp;        // d loss / d log_probs, zero when infeasible
  bool feasible = true; // false when T < |labels| + required blank separators
};

// Forward-backward CTC in the log domain over the blank-interleaved label
// sequence. log_probs is [T x C] with exp rows summing to 1 (checked within
// 1e-6); labels are class indices, blank (0) not allowed. The gradient w.r.t.
// log_probs is -occupancy, so per-frame occupancy rows sum to 1.
CtcLossResult CtcLoss(const Mat& log_probs, const std::vector<int>& labels);

// Per-frame argmax, collapse adjacent repeats, drop blanks.
std::vector<int> GreedyDecode(const Mat& log_probs);

}  // namespace acmix

#endif  // ACMIX_CTC_CTC_LOSS_H_
