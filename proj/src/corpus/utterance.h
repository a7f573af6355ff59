// src/corpus/utterance.h

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

#ifndef ACMIX_CORPUS_UTTERANCE_H_
#define ACMIX_CORPUS_UTTERANCE_H_

#include <string>
#include <vector>

namespace acmix {

constexpr int kSampleRate = 16000;

enum class Domain { kSource, kTarget };

inline const char* DomainName(Domain d) {
  return d == Domain::kSource ? "source" : "target";
}

struct Utterance {
  std::string id;
  std::vector<double> samples;          // mono 16 kHz, amplitudes in [-1, 1]
  std::vector<std::string> transcript;  // normalized word tokens
  Domain domain = Domain::kSource;

  double DurationSeconds() const {
    return double(samples.size()) / double(kSampleRate);
  }
};

// Keeps utterances with duration >= min_s, order preserved.
std::vector<Utterance> FilterShort(const std::vector<Utterance>& utts,
                                   double min_s = 2.5);

}  // namespace acmix

#endif  // ACMIX_CORPUS_UTTERANCE_H_
