// src/eval/sigtest.h

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

#ifndef ACMIX_EVAL_SIGTEST_H_
#define ACMIX_EVAL_SIGTEST_H_

#include <vector>

namespace acmix {

// Matched-pairs word-error significance test over utterance segments:
// d_i = errA_i - errB_i, Z = mean(d) / (stddev(d) / sqrt(n)) with the
// sample (n-1) standard deviation, p two-tailed via the normal tail.
struct SigResult {
  double z = 0.0;
  double p_two_tailed = 1.0;
  int n_segments = 0;
  bool significant_at_001 = false;  // p < 0.01
  bool degenerate = false;          // zero variance with nonzero mean
};

SigResult Mapsswe(const std::vector<int>& err_a, const std::vector<int>& err_b);

}  // namespace acmix

#endif  // ACMIX_EVAL_SIGTEST_H_
