// src/train/finetune.h

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

#ifndef ACMIX_TRAIN_FINETUNE_H_
#define ACMIX_TRAIN_FINETUNE_H_

#include <string>
#include <vector>

#include "corpus/utterance.h"
#include "ctc/alphabet.h"
#include "encoder/encoder.h"
#include "train/head.h"
#include "train/optim.h"

namespace acmix {

// Step 2: supervised CTC fine-tuning on labelled target data. head_ft trains
// only the prediction head; full_ft additionally trains the encoder blocks
// marked trainable (the blocks adapted in step 1). Utterances shorter than
// min_duration_s or with empty transcripts are excluded at admission.
// Frozen encoder prefixes are computed once per utterance and cached.
enum class FinetuneMode { kHeadFt, kFullFt };

const char* FinetuneModeName(FinetuneMode m);
FinetuneMode ParseFinetuneMode(const std::string& name);

struct FinetuneConfig {
  FinetuneMode mode = FinetuneMode::kFullFt;
  int64_t steps = 5000;
  int batch_size = 8;
  Schedule schedule{/*warmup*/ 500, /*total*/ 5000, /*peak*/ 8e-5,
                    /*final*/ 8e-7};
  int head_hidden = 32;
  int head_layers = 2;
  AdamOptimizer::Config adam;
  uint64_t seed = 0;
  double min_duration_s = 2.5;
  std::string trace_path;
  std::string ckpt_path;
};

struct FinetuneResult {
  std::vector<double> loss_trace;
  HeadState head;
  int64_t skipped_steps = 0;
  int64_t admitted_utterances = 0;
  int64_t infeasible_utterances = 0;  // CTC-infeasible at training time
};

FinetuneResult Finetune(EncoderState* encoder,
                        const std::vector<Utterance>& labelled,
                        const LabelAlphabet& alphabet,
                        const FinetuneConfig& cfg);

// Forward path shared with decoding: log-softmax CTC posteriors for one
// utterance.
Mat CtcLogProbs(const EncoderState& encoder, const HeadState& head,
                const LogMelExtractor& logmel,
                const std::vector<double>& samples);

// Rebuilds a HeadState from checkpoint arrays under "head/".
HeadState HeadFromArrays(const ArrayMap& arrays, int in_dim, int n_out);

}  // namespace acmix

#endif  // ACMIX_TRAIN_FINETUNE_H_
