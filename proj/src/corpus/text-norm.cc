// src/corpus/text-norm.cc

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

#include "corpus/text-norm.h"

#include <cctype>

namespace acmix {

namespace {

// Removes every balanced open...close span, innermost first. An open with no
// matching close strips to the end of the string and sets *warned. Closers
// with no matching open are kept as literal text.
std::string StripSpans(const std::string& s, const std::string& open,
                       const std::string& close, bool* warned) {
  std::string out;
  std::vector<size_t> opens;  // positions in `out` where an open began
  size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, open.size(), open) == 0) {
      opens.push_back(out.size());
      out.append(open);
      i += open.size();
    } else if (!opens.empty() && s.compare(i, close.size(), close) == 0) {
      out.resize(opens.back());
      opens.pop_back();
      i += close.size();
    } else {
      out.push_back(s[i]);
      ++i;
    }
  }
  if (!opens.empty()) {
    out.resize(opens.front());
    if (warned) *warned = true;
  }
  return out;
}

}  // namespace

std::vector<std::string> NormalizeTranscript(const std::string& raw,
                                             bool* warned) {
  if (warned) *warned = false;
  std::string s = raw;
  // Span removal can expose new delimiter pairs, so iterate to a fixpoint.
  for (;;) {
    std::string next = StripSpans(s, "<", ">", warned);
    next = StripSpans(next, "((", "))", warned);
    if (next == s) break;
    s = std::move(next);
  }
  std::vector<std::string> tokens;
  std::string tok;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) tokens.push_back(std::move(tok)), tok.clear();
    } else {
      tok.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!tok.empty()) tokens.push_back(std::move(tok));
  return tokens;
}

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace acmix
