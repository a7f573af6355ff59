// src/train/optim.h

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

#ifndef ACMIX_TRAIN_OPTIM_H_
#define ACMIX_TRAIN_OPTIM_H_

#include <cstdint>
#include <string>

#include "base/mat.h"
#include "base/ndarray-io.h"

namespace acmix {

// Piecewise-linear warmup/decay schedule: 0 -> peak over [0, warmup], then
// peak -> final over [warmup, total]. The three anchors (0, peak, final) are
// returned exactly at steps 0, warmup and total.
struct Schedule {
  int64_t warmup_steps = 2500;
  int64_t total_steps = 150000;
  double peak_lr = 1e-4;
  double final_lr = 1e-6;
};

void ValidateSchedule(const Schedule& s);

// Steps outside [0, total] clamp to the endpoint and set *warned.
double LrAt(const Schedule& s, int64_t step, bool* warned = nullptr);

// Bias-corrected Adam over a named parameter set. Only parameters present in
// the gradient map are updated; moments are allocated lazily per name. A
// NaN/Inf gradient aborts the whole step (parameters and moments keep their
// previous values) and returns false.
class AdamOptimizer {
 public:
  struct Config {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double clip_norm = 5.0;  // global gradient-norm clip; <= 0 disables
  };

  AdamOptimizer() : AdamOptimizer(Config{0.9, 0.999, 1e-8, 5.0}) {}
  explicit AdamOptimizer(const Config& cfg) : cfg_(cfg) {}

  bool Step(ArrayMap* params, const ArrayMap& grads, double lr);
  // Same update over parameters owned elsewhere.
  bool Step(const std::map<std::string, Mat*>& params, const ArrayMap& grads,
            double lr);

  int64_t step_count() const { return step_; }

  // Moments for checkpointing under an "optim/" prefix.
  ArrayMap ExportState() const;
  void ImportState(const ArrayMap& state, int64_t step);

 private:
  Config cfg_;
  int64_t step_ = 0;
  ArrayMap m_, v_;
};

}  // namespace acmix

#endif  // ACMIX_TRAIN_OPTIM_H_
