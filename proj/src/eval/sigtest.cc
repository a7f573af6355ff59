// src/eval/sigtest.cc

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

#include "eval/sigtest.h"

#include <cmath>

#include "base/errors.h"

namespace acmix {

SigResult Mapsswe(const std::vector<int>& err_a,
                  const std::vector<int>& err_b) {
  if (err_a.size() != err_b.size()) {
    throw DataError("mapsswe: segment sets differ in size");
  }
  const int n = int(err_a.size());
  if (n < 2) throw DataError("mapsswe: need at least 2 segments");

  SigResult res;
  res.n_segments = n;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += double(err_a[size_t(i)] - err_b[size_t(i)]);
  mean /= double(n);
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = double(err_a[size_t(i)] - err_b[size_t(i)]) - mean;
    ss += d * d;
  }
  const double stddev = std::sqrt(ss / double(n - 1));

  if (stddev == 0.0) {
    if (mean == 0.0) {
      res.z = 0.0;
      res.p_two_tailed = 1.0;
    } else {
      res.z = mean > 0.0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
      res.p_two_tailed = 0.0;
      res.degenerate = true;
    }
  } else {
    res.z = mean / (stddev / std::sqrt(double(n)));
    res.p_two_tailed = std::erfc(std::abs(res.z) / std::sqrt(2.0));
  }
  res.significant_at_001 = res.p_two_tailed < 0.01;
  return res;
}

}  // namespace acmix
