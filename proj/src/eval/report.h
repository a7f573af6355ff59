// src/eval/report.h

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

#ifndef ACMIX_EVAL_REPORT_H_
#define ACMIX_EVAL_REPORT_H_

#include <map>
#include <string>
#include <vector>

#include "eval/sigtest.h"
#include "eval/wer.h"

namespace acmix {

// Comparison grid: rows are systems, column groups are supervised subsets
// (or a single group for plain runs), each group carrying a "test set" and
// an optional "+LM" column. Non-baseline rows get one significance
// superscript per baseline at p = 0.01 from the matched-pairs test over
// per-utterance error counts: dagger = significant, minus = not.
struct CompareCell {
  WerReport no_lm;
  WerReport with_lm;
  bool has_lm = false;
};

struct CompareRow {
  std::string system;
  std::map<std::string, CompareCell> cells;  // keyed by column group
};

struct CompareTable {
  std::vector<std::string> groups;     // ordered column groups
  std::vector<CompareRow> rows;
  std::vector<std::string> baselines;  // 0..2 row labels
  double alpha = 0.01;
};

struct RenderedReport {
  std::string markdown;
  std::string csv;
};

// Validates that every report within a column shares the same utterance set;
// mismatched sets raise DataError.
RenderedReport Compare(const CompareTable& table);

// Significance of A vs B from matched per-utterance error counts.
SigResult CompareReports(const WerReport& a, const WerReport& b);

std::string FormatWerPercent(double wer_fraction);

}  // namespace acmix

#endif  // ACMIX_EVAL_REPORT_H_
