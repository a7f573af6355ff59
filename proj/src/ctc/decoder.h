// src/ctc/decoder.h

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

#ifndef ACMIX_CTC_DECODER_H_
#define ACMIX_CTC_DECODER_H_

#include <string>
#include <vector>

#include "base/mat.h"
#include "ctc/alphabet.h"
#include "ctc/arpa-lm.h"

namespace acmix {

struct BeamConfig {
  int beam = 16;
  double lm_weight = 1.0;
  double word_bonus = 0.0;
  bool score_eos = true;  // add P(</s> | context) at finalization
};

struct BeamResult {
  std::vector<int> labels;
  double score = 0.0;  // acoustic ln-prob + lm_weight * lm + bonus * words
};

// Prefix beam search maintaining (p_blank, p_nonblank) per prefix in the log
// domain. Word-level LM shallow fusion: each word completed at a space token
// (and the trailing partial word at finalization) adds
// lm_weight * ln P(word | history) plus word_bonus to the hypothesis score.
// lm may be nullptr for acoustic-only search.
BeamResult BeamDecode(const Mat& log_probs, const LabelAlphabet& alphabet,
                      const ArpaLm* lm, const BeamConfig& cfg);

// Total CTC posterior ln P(labels | log_probs), summing over all alignments;
// -inf when the labeling is infeasible. Used by decoder tests.
double LabelingLogProb(const Mat& log_probs, const std::vector<int>& labels);

}  // namespace acmix

#endif  // ACMIX_CTC_DECODER_H_
