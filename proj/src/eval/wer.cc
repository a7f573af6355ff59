// src/eval/wer.cc

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

#include "eval/wer.h"

#include <cstdint>

#include "base/errors.h"
#include "base/parallel.h"

namespace acmix {

UttScore ScoreUtterance(const std::string& id,
                        const std::vector<std::string>& ref,
                        const std::vector<std::string>& hyp) {
  const int m = int(ref.size()), n = int(hyp.size());
  // Cell = (cost, diag) with cost minimized then diagonal moves maximized;
  // both are additive along paths, so lexicographic DP is exact. diag
  // determines the decomposition: del = m - diag, ins = n - diag,
  // sub = cost - del - ins.
  struct Cell {
    int cost;
    int diag;
  };
  std::vector<Cell> prev(size_t(n) + 1), cur(size_t(n) + 1);
  for (int j = 0; j <= n; ++j) prev[size_t(j)] = {j, 0};
  auto better = [](const Cell& a, const Cell& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.diag > b.diag;
  };
  for (int i = 1; i <= m; ++i) {
    cur[0] = {i, 0};
    for (int j = 1; j <= n; ++j) {
      const bool match = ref[size_t(i - 1)] == hyp[size_t(j - 1)];
      Cell best = {prev[size_t(j - 1)].cost + (match ? 0 : 1),
                   prev[size_t(j - 1)].diag + 1};
      Cell del = {prev[size_t(j)].cost + 1, prev[size_t(j)].diag};
      Cell ins = {cur[size_t(j - 1)].cost + 1, cur[size_t(j - 1)].diag};
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      cur[size_t(j)] = best;
    }
    std::swap(prev, cur);
  }
  const Cell& final = prev[size_t(n)];
  UttScore s;
  s.id = id;
  s.n_ref_words = m;
  s.n_del = m - final.diag;
  s.n_ins = n - final.diag;
  s.n_sub = final.cost - s.n_del - s.n_ins;
  return s;
}

WerReport ComputeWer(const std::vector<ScoredPair>& pairs,
                     const std::string& label) {
  WerReport report;
  report.label = label;
  report.utts.resize(pairs.size());
  ParallelFor(int64_t(pairs.size()), [&](int64_t i) {
    const auto& p = pairs[size_t(i)];
    if (p.ref.empty()) {
      throw DataError("wer: empty reference for utterance '" + p.id + "'");
    }
    report.utts[size_t(i)] = ScoreUtterance(p.id, p.ref, p.hyp);
  });
  return report;
}

}  // namespace acmix
