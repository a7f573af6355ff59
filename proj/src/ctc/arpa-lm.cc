// src/ctc/arpa-lm.cc

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

#include "ctc/arpa-lm.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "base/errors.h"
#include "base/ndarray-io.h"

namespace acmix {

namespace {

std::vector<std::string> SplitWs(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string Trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string ArpaLm::Key(const int* ids, int n) {
  std::string k(size_t(n) * sizeof(int), '\0');
  std::memcpy(k.data(), ids, size_t(n) * sizeof(int));
  return k;
}

const ArpaLm::Entry* ArpaLm::Find(const int* ids, int n) const {
  if (n < 1 || n > order_) return nullptr;
  for (int i = 0; i < n; ++i) {
    if (ids[i] < 0) return nullptr;  // kNoWord never matches
  }
  const auto& table = tables_[size_t(n - 1)];
  auto it = table.find(Key(ids, n));
  return it == table.end() ? nullptr : &it->second;
}

ArpaLm ArpaLm::FromFile(const std::string& path) {
  return FromString(ReadTextFile(path));
}

ArpaLm ArpaLm::FromString(const std::string& text) {
  ArpaLm lm;
  std::istringstream is(text);
  std::string line;

  // \data\ header with ngram counts.
  std::vector<int64_t> counts;
  bool in_data = false;
  while (std::getline(is, line)) {
    line = Trim(line);
    if (line == "\\data\\") {
      in_data = true;
      continue;
    }
    if (in_data) {
      if (line.empty()) continue;
      if (line.rfind("ngram", 0) == 0) {
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw DataError("arpa: bad ngram line: " + line);
        counts.push_back(std::stoll(line.substr(eq + 1)));
        continue;
      }
      break;  // first section header reached
    }
  }
  if (counts.empty()) throw DataError("arpa: missing \\data\\ section");
  lm.order_ = int(counts.size());
  lm.tables_.resize(counts.size());

  auto intern = [&lm](const std::string& w) {
    auto it = lm.word_ids_.find(w);
    if (it != lm.word_ids_.end()) return it->second;
    int id = int(lm.vocab_.size());
    lm.vocab_.push_back(w);
    lm.word_ids_.emplace(w, id);
    return id;
  };

  // `line` currently holds the first section header ("\1-grams:").
  int cur_order = 0;
  do {
    line = Trim(line);
    if (line.empty()) continue;
    if (line == "\\end\\") break;
    if (line.size() >= 2 && line[0] == '\\') {
      size_t dash = line.find("-grams:");
      if (dash == std::string::npos)
        throw DataError("arpa: unexpected section header: " + line);
      cur_order = std::stoi(line.substr(1, dash - 1));
      if (cur_order < 1 || cur_order > lm.order_)
        throw DataError("arpa: section order out of range: " + line);
      continue;
    }
    if (cur_order == 0) continue;
    auto fields = SplitWs(line);
    // logp w1 ... wN [backoff]
    if (int(fields.size()) < 1 + cur_order)
      throw DataError("arpa: short n-gram line: " + line);
    Entry e;
    e.logp = std::stod(fields[0]);
    std::vector<int> ids(static_cast<size_t>(cur_order));
    for (int i = 0; i < cur_order; ++i) ids[size_t(i)] = intern(fields[size_t(1 + i)]);
    if (int(fields.size()) > 1 + cur_order) {
      e.backoff = std::stod(fields[size_t(1 + cur_order)]);
      e.has_backoff = true;
    }
    lm.tables_[size_t(cur_order - 1)].emplace(Key(ids.data(), cur_order), e);
  } while (std::getline(is, line));

  auto it = lm.word_ids_.find("<unk>");
  lm.unk_id_ = it == lm.word_ids_.end() ? -1 : it->second;
  return lm;
}

int ArpaLm::WordId(const std::string& word) const {
  auto it = word_ids_.find(word);
  if (it != word_ids_.end()) return it->second;
  return unk_id_;  // -1 when no <unk>
}

double ArpaLm::LogProb10(const std::vector<int>& context, int word) const {
  if (word < 0) return kOovLog10;
  // Clip the context to the model order.
  int ctx_len = int(context.size());
  if (ctx_len > order_ - 1) ctx_len = order_ - 1;
  const int* ctx = context.data() + (context.size() - size_t(ctx_len));

  double backoff_acc = 0.0;
  for (int n = ctx_len; n >= 0; --n) {
    std::vector<int> ids(static_cast<size_t>(n + 1));
    for (int i = 0; i < n; ++i) ids[size_t(i)] = ctx[ctx_len - n + i];
    ids[size_t(n)] = word;
    const Entry* e = Find(ids.data(), n + 1);
    if (e != nullptr) return backoff_acc + e->logp;
    // No stored n-gram: add the context's backoff weight and shorten.
    if (n >= 1) {
      std::vector<int> h(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) h[size_t(i)] = ctx[ctx_len - n + i];
      const Entry* he = Find(h.data(), n);
      if (he != nullptr && he->has_backoff) backoff_acc += he->backoff;
    }
  }
  // Unigram for `word` missing entirely.
  return kOovLog10;
}

double ArpaLm::LogProb10(const std::vector<std::string>& context,
                         const std::string& word) const {
  std::vector<int> ctx;
  ctx.reserve(context.size());
  for (const auto& w : context) ctx.push_back(WordId(w));
  return LogProb10(ctx, WordId(word));
}

}  // namespace acmix
