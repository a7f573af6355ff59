// src/ctc/alphabet.h

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

#ifndef ACMIX_CTC_ALPHABET_H_
#define ACMIX_CTC_ALPHABET_H_

#include <string>
#include <vector>

namespace acmix {

// Emission alphabet for CTC. Class 0 is always blank; classes 1..n are the
// tokens. Word-level text uses the space token as the word boundary.
class LabelAlphabet {
 public:
  // space + 'a'..'z' (28 classes including blank).
  static LabelAlphabet Chars();

  explicit LabelAlphabet(std::vector<std::string> tokens);

  int blank() const { return 0; }
  int n_classes() const { return int(tokens_.size()) + 1; }
  int space_class() const { return space_class_; }

  // Class index for a token; -1 when absent.
  int ClassOf(const std::string& token) const;
  const std::string& TokenOf(int class_index) const;

  // "ba ki" as words -> [b, a, space, k, i] class indices. Throws DataError
  // naming the offending token when a character is out of alphabet.
  std::vector<int> EncodeWords(const std::vector<std::string>& words) const;

  std::string LabelsToText(const std::vector<int>& labels) const;
  std::vector<std::string> LabelsToWords(const std::vector<int>& labels) const;

 private:
  std::vector<std::string> tokens_;  // class i <-> tokens_[i-1]
  int space_class_ = -1;
};

}  // namespace acmix

#endif  // ACMIX_CTC_ALPHABET_H_
