// src/ctc/alphabet.cc

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

#include "ctc/alphabet.h"

#include "base/errors.h"

namespace acmix {

LabelAlphabet LabelAlphabet::Chars() {
  std::vector<std::string> tokens;
  tokens.push_back(" ");
  for (char c = 'a'; c <= 'z'; ++c) tokens.push_back(std::string(1, c));
  return LabelAlphabet(std::move(tokens));
}

LabelAlphabet::LabelAlphabet(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] == " ") space_class_ = int(i) + 1;
  }
}

int LabelAlphabet::ClassOf(const std::string& token) const {
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] == token) return int(i) + 1;
  }
  return -1;
}

const std::string& LabelAlphabet::TokenOf(int class_index) const {
  return tokens_.at(size_t(class_index - 1));
}

std::vector<int> LabelAlphabet::EncodeWords(
    const std::vector<std::string>& words) const {
  std::vector<int> out;
  for (size_t w = 0; w < words.size(); ++w) {
    if (w > 0) {
      if (space_class_ < 0) throw DataError("alphabet has no space token");
      out.push_back(space_class_);
    }
    for (char c : words[w]) {
      int cls = ClassOf(std::string(1, c));
      if (cls < 0) {
        throw DataError("token '" + std::string(1, c) +
                        "' in word '" + words[w] + "' is out of alphabet");
      }
      out.push_back(cls);
    }
  }
  return out;
}

std::string LabelAlphabet::LabelsToText(const std::vector<int>& labels) const {
  std::string s;
  for (int l : labels) s += TokenOf(l);
  return s;
}

std::vector<std::string> LabelAlphabet::LabelsToWords(
    const std::vector<int>& labels) const {
  std::vector<std::string> words;
  std::string cur;
  for (int l : labels) {
    if (l == space_class_) {
      if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
    } else {
      cur += TokenOf(l);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

}  // namespace acmix
