// src/corpus/text-norm.h

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

#ifndef ACMIX_CORPUS_TEXT_NORM_H_
#define ACMIX_CORPUS_TEXT_NORM_H_

#include <string>
#include <vector>

namespace acmix {

// Transcript normalization: removes annotation spans enclosed in "<...>" and
// "((...))" (nested spans are stripped innermost-first to a fixpoint), then
// lowercases and whitespace-tokenizes. An opening delimiter with no matching
// closer strips to the end of the string and sets *warned. Stray closers are
// kept as literal text. Idempotent.
std::vector<std::string> NormalizeTranscript(const std::string& raw,
                                             bool* warned = nullptr);

std::string JoinTokens(const std::vector<std::string>& tokens);

}  // namespace acmix

#endif  // ACMIX_CORPUS_TEXT_NORM_H_
