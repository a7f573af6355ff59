// src/ctc/arpa-est.h

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

#ifndef ACMIX_CTC_ARPA_EST_H_
#define ACMIX_CTC_ARPA_EST_H_

#include <string>
#include <vector>

namespace acmix {

// Small word n-gram estimator emitting text ARPA, used to build the fusion
// LM for synthetic corpora. Absolute discounting with Katz-style backoff
// weights; the leftover unigram mass goes to <unk>, so every context's
// predictive distribution sums to 1 exactly.
struct ArpaTrainConfig {
  int order = 4;
  double discount = 0.5;  // in (0, 1)
};

std::string EstimateArpa(const std::vector<std::vector<std::string>>& sentences,
                         const ArpaTrainConfig& cfg);

void EstimateArpaToFile(const std::vector<std::vector<std::string>>& sentences,
                        const ArpaTrainConfig& cfg, const std::string& path);

}  // namespace acmix

#endif  // ACMIX_CTC_ARPA_EST_H_
