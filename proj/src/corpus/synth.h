// src/corpus/synth.h

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

#ifndef ACMIX_CORPUS_SYNTH_H_
#define ACMIX_CORPUS_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "corpus/utterance.h"

namespace acmix {

// Deterministic synthetic two-domain corpus. Each vocabulary word is a fixed
// sequence of 2-4 sinusoid segments whose frequencies are a pure function of
// (seed, word). Source utterances concatenate word signals with short gaps;
// target utterances additionally apply a multiplicative frequency warp
// (accent surrogate) and additive white noise at noise_snr_db. Identical
// (spec, domain, count, offset) always produces bit-identical output.
struct SynthSpec {
  int vocab_size = 10;
  int words_min = 8;   // words per utterance, inclusive range
  int words_max = 10;
  int speaker_count = 8;
  double accent_warp = 1.25;       // target-domain frequency multiplier
  double noise_snr_db = 10.0;      // target-domain additive noise; +inf = none
  uint64_t seed = 0;
};

// Fixed spelling table, independent of seed, so alphabets and LMs are stable
// across corpus seeds.
std::string WordText(int w);

struct WordSegment {
  double freq_hz;  // base frequency before speaker pitch / accent warp
  int n_samples;
};

std::vector<WordSegment> WordSegments(const SynthSpec& spec, int w);

// Word waveform with all segment frequencies scaled by freq_scale.
std::vector<double> SynthWordSignal(const SynthSpec& spec, int w,
                                    double freq_scale = 1.0,
                                    double gain = 1.0);

// Utterances indexed [index_offset, index_offset + count); disjoint offsets
// give disjoint content streams. ids are "<id_prefix><index>" (zero-padded).
std::vector<Utterance> SynthCorpus(const SynthSpec& spec, Domain domain,
                                   int count, int64_t index_offset = 0,
                                   const std::string& id_prefix = "utt-");

}  // namespace acmix

#endif  // ACMIX_CORPUS_SYNTH_H_
