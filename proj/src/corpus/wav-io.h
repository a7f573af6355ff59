// src/corpus/wav-io.h

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

#ifndef ACMIX_CORPUS_WAV_IO_H_
#define ACMIX_CORPUS_WAV_IO_H_

#include <string>
#include <vector>

namespace acmix {

// RIFF/WAVE, 16-bit PCM, mono, 16 kHz only. Samples are scaled to [-1, 1]
// by division by 32768. Other sample rates, channel counts, or codecs raise
// DataError naming the offending field.
std::vector<double> ReadWav(const std::string& path);
void WriteWav(const std::string& path, const std::vector<double>& samples);

// Header-only validation (existence, format); does not load samples.
void CheckWavHeader(const std::string& path);

}  // namespace acmix

#endif  // ACMIX_CORPUS_WAV_IO_H_
