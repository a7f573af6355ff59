// src/train/adapt.h

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

#ifndef ACMIX_TRAIN_ADAPT_H_
#define ACMIX_TRAIN_ADAPT_H_

#include <string>
#include <vector>

#include "corpus/utterance.h"
#include "encoder/encoder.h"
#include "mixup/mixup.h"
#include "spin/spin.h"
#include "train/optim.h"

namespace acmix {

// Step 1: self-supervised adaptation. Per step: compose a batch by strategy,
// build two mixed views per utterance, encode both views, project and score
// against the prototypes, compute equal-partition codes over the pooled
// frames of both views (stop-gradient), and take one Adam step on the last-N
// encoder blocks plus the spin head. Transcripts are never consumed.
struct AdaptConfig {
  int64_t steps = 2000;
  int batch_size = 8;
  int last_n = 2;
  Schedule schedule{/*warmup*/ 200, /*total*/ 2000, /*peak*/ 1e-4,
                    /*final*/ 1e-6};
  MixupConfig mixup;
  SpinConfig spin;
  AdamOptimizer::Config adam;
  uint64_t seed = 0;
  std::string trace_path;  // loss trace CSV (step,loss,lr); empty = skip
  std::string ckpt_path;   // final-step checkpoint; empty = skip
};

struct AdaptResult {
  std::vector<double> loss_trace;  // one entry per step
  SpinState spin;
  int64_t skipped_steps = 0;  // aborted on non-finite gradients
};

AdaptResult Adapt(EncoderState* encoder,
                  const std::vector<Utterance>& source_pool,
                  const std::vector<Utterance>& target_pool,
                  const AdaptConfig& cfg);

// Shared helper: "step,loss,lr" CSV with stable formatting.
std::string FormatTrace(const std::vector<double>& losses,
                        const Schedule& schedule);

}  // namespace acmix

#endif  // ACMIX_TRAIN_ADAPT_H_
