// src/corpus/utterance.cc

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

#include "corpus/utterance.h"

namespace acmix {

std::vector<Utterance> FilterShort(const std::vector<Utterance>& utts,
                                   double min_s) {
  std::vector<Utterance> out;
  out.reserve(utts.size());
  for (const auto& u : utts) {
    if (u.DurationSeconds() >= min_s) out.push_back(u);
  }
  return out;
}

}  // namespace acmix
