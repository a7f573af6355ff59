// src/eval/wer.h

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

#ifndef ACMIX_EVAL_WER_H_
#define ACMIX_EVAL_WER_H_

#include <string>
#include <vector>

namespace acmix {

struct UttScore {
  std::string id;
  int n_ref_words = 0;
  int n_sub = 0;
  int n_del = 0;
  int n_ins = 0;
  int Errors() const { return n_sub + n_del + n_ins; }
};

struct WerReport {
  std::string label;
  std::vector<UttScore> utts;

  int64_t TotalErrors() const {
    int64_t e = 0;
    for (const auto& u : utts) e += u.Errors();
    return e;
  }
  int64_t TotalRefWords() const {
    int64_t n = 0;
    for (const auto& u : utts) n += u.n_ref_words;
    return n;
  }
  double Wer() const {
    const int64_t n = TotalRefWords();
    return n == 0 ? 0.0 : double(TotalErrors()) / double(n);
  }
};

// Minimal edit distance with unit sub/del/ins costs. Among minimal
// alignments the substitution-maximal decomposition is chosen; it is unique,
// so counts are deterministic and swap symmetrically with ref/hyp exchange.
UttScore ScoreUtterance(const std::string& id,
                        const std::vector<std::string>& ref,
                        const std::vector<std::string>& hyp);

// refs/hyps aligned by position in parallel vectors of (id, tokens); an id
// mismatch raises DataError.
struct ScoredPair {
  std::string id;
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
};
WerReport ComputeWer(const std::vector<ScoredPair>& pairs,
                     const std::string& label);

}  // namespace acmix

#endif  // ACMIX_EVAL_WER_H_
