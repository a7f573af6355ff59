// src/ctc/arpa-lm.h

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

#ifndef ACMIX_CTC_ARPA_LM_H_
#define ACMIX_CTC_ARPA_LM_H_

#include <string>
#include <unordered_map>
#include <vector>

namespace acmix {

// Text ARPA n-gram language model reader with standard back-off queries:
// use the stored n-gram when present, otherwise backoff(context) +
// P(token | shorter context). All stored values are log10.
class ArpaLm {
 public:
  static constexpr double kOovLog10 = -99.0;
  static constexpr int kNoWord = -1;  // OOV with no <unk> entry

  static ArpaLm FromFile(const std::string& path);
  static ArpaLm FromString(const std::string& text);

  int order() const { return order_; }
  size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  bool has_unk() const { return unk_id_ >= 0; }

  // Word id for queries; OOV maps to <unk> when present, else kNoWord.
  int WordId(const std::string& word) const;

  // log10 P(word | context), context ordered oldest..newest. Ids may be
  // kNoWord (never matches any stored n-gram).
  double LogProb10(const std::vector<int>& context, int word) const;

  // Convenience string interface.
  double LogProb10(const std::vector<std::string>& context,
                   const std::string& word) const;

 private:
  struct Entry {
    double logp = 0.0;
    double backoff = 0.0;  // log10; 0 when absent
    bool has_backoff = false;
  };

  static std::string Key(const int* ids, int n);
  const Entry* Find(const int* ids, int n) const;

  int order_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> word_ids_;
  int unk_id_ = -1;
  // One table per n-gram order (index 0 = unigrams).
  std::vector<std::unordered_map<std::string, Entry>> tables_;
};

}  // namespace acmix

#endif  // ACMIX_CTC_ARPA_LM_H_
