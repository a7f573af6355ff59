// src/ctc/decoder.cc

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

#include "ctc/decoder.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "base/errors.h"

namespace acmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn10 = 2.302585092994046;

inline double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct Hyp {
  double p_b = kNegInf;   // ln mass of alignments ending in blank
  double p_nb = kNegInf;  // ln mass ending in the last token
  double lm_ln = 0.0;     // accumulated LM ln-prob of completed words
  int n_words = 0;
  std::vector<int> lm_ctx;  // word ids, oldest..newest, at most order-1
  std::string partial;      // characters of the in-progress word

  double Acoustic() const { return LogAdd(p_b, p_nb); }
};

using Beam = std::map<std::vector<int>, Hyp>;

double Score(const Hyp& h, const BeamConfig& cfg) {
  return h.Acoustic() + cfg.lm_weight * h.lm_ln +
         cfg.word_bonus * double(h.n_words);
}

// Word-level state transition when the prefix is extended by `token_class`.
void ExtendLmState(Hyp* h, int token_class, const LabelAlphabet& alphabet,
                   const ArpaLm* lm) {
  if (token_class == alphabet.space_class()) {
    if (h->partial.empty()) return;  // repeated boundary, no word formed
    if (lm != nullptr) {
      const int wid = lm->WordId(h->partial);
      h->lm_ln += kLn10 * lm->LogProb10(h->lm_ctx, wid);
      h->lm_ctx.push_back(wid);
      const size_t keep = size_t(std::max(lm->order() - 1, 0));
      if (h->lm_ctx.size() > keep) {
        h->lm_ctx.erase(h->lm_ctx.begin(),
                        h->lm_ctx.end() - long(keep));
      }
    }
    h->n_words += 1;
    h->partial.clear();
  } else {
    h->partial += alphabet.TokenOf(token_class);
  }
}

}  // namespace

BeamResult BeamDecode(const Mat& log_probs, const LabelAlphabet& alphabet,
                      const ArpaLm* lm, const BeamConfig& cfg) {
  if (cfg.beam < 1) throw ConfigError("beam_decode: beam must be >= 1");
  const int64_t T = log_probs.rows;
  const int64_t C = log_probs.cols;
  if (C != alphabet.n_classes()) {
    throw DataError("beam_decode: log-prob classes " + std::to_string(C) +
                    " != alphabet classes " +
                    std::to_string(alphabet.n_classes()));
  }

  Beam beam;
  {
    Hyp root;
    root.p_b = 0.0;
    if (lm != nullptr) root.lm_ctx = {lm->WordId("<s>")};
    beam.emplace(std::vector<int>{}, std::move(root));
  }

  std::vector<int> key;
  for (int64_t t = 0; t < T; ++t) {
    const double* lp = log_probs.RowPtr(t);
    Beam next;
    for (const auto& [prefix, hyp] : beam) {
      const double total = hyp.Acoustic();
      // Blank keeps the prefix.
      {
        auto it = next.find(prefix);
        if (it == next.end()) {
          Hyp h = hyp;
          h.p_b = kNegInf;
          h.p_nb = kNegInf;
          it = next.emplace(prefix, std::move(h)).first;
        }
        it->second.p_b = LogAdd(it->second.p_b, total + lp[0]);
      }
      for (int c = 1; c < C; ++c) {
        const bool repeat = !prefix.empty() && prefix.back() == c;
        if (repeat) {
          // Same char without a blank collapses into the same prefix.
          auto it = next.find(prefix);
          if (it == next.end()) {
            Hyp h = hyp;
            h.p_b = kNegInf;
            h.p_nb = kNegInf;
            it = next.emplace(prefix, std::move(h)).first;
          }
          it->second.p_nb = LogAdd(it->second.p_nb, hyp.p_nb + lp[c]);
        }
        const double ext_mass = repeat ? hyp.p_b + lp[c] : total + lp[c];
        if (ext_mass == kNegInf) continue;
        key = prefix;
        key.push_back(c);
        auto it = next.find(key);
        if (it == next.end()) {
          Hyp h = hyp;
          h.p_b = kNegInf;
          h.p_nb = kNegInf;
          ExtendLmState(&h, c, alphabet, lm);
          it = next.emplace(key, std::move(h)).first;
        }
        it->second.p_nb = LogAdd(it->second.p_nb, ext_mass);
      }
    }
    // Prune to the beam width; ties resolve by map order (lexicographic
    // prefix), which keeps the search deterministic.
    if (int64_t(next.size()) > cfg.beam) {
      std::vector<std::pair<double, const std::vector<int>*>> ranked;
      ranked.reserve(next.size());
      for (const auto& [prefix, hyp] : next) {
        ranked.emplace_back(Score(hyp, cfg), &prefix);
      }
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& a, const auto& b) {
                         return a.first > b.first;
                       });
      Beam pruned;
      for (int i = 0; i < cfg.beam; ++i) {
        pruned.emplace(*ranked[size_t(i)].second,
                       std::move(next.at(*ranked[size_t(i)].second)));
      }
      next = std::move(pruned);
    }
    beam = std::move(next);
  }

  // Finalize: flush the trailing partial word, optionally score </s>.
  BeamResult best;
  double best_score = kNegInf;
  bool have = false;
  for (const auto& [prefix, hyp] : beam) {
    Hyp h = hyp;
    if (!h.partial.empty()) {
      if (lm != nullptr) {
        const int wid = lm->WordId(h.partial);
        h.lm_ln += kLn10 * lm->LogProb10(h.lm_ctx, wid);
        h.lm_ctx.push_back(wid);
      }
      h.n_words += 1;
      h.partial.clear();
    }
    if (lm != nullptr && cfg.score_eos) {
      h.lm_ln += kLn10 * lm->LogProb10(h.lm_ctx, lm->WordId("</s>"));
    }
    const double s = Score(h, cfg);
    if (!have || s > best_score) {
      have = true;
      best_score = s;
      best.labels = prefix;
      best.score = s;
    }
  }
  return best;
}

double LabelingLogProb(const Mat& log_probs, const std::vector<int>& labels) {
  const int64_t T = log_probs.rows;
  const int64_t S = 2 * int64_t(labels.size()) + 1;
  auto ext = [&](int64_t s) -> int {
    return (s % 2 == 0) ? 0 : labels[size_t(s / 2)];
  };
  auto can_skip = [&](int64_t s) {
    return s % 2 == 1 && s >= 2 && ext(s) != ext(s - 2);
  };
  std::vector<double> prev(size_t(S), kNegInf), cur(size_t(S), kNegInf);
  prev[0] = log_probs(0, 0);
  if (S > 1) prev[1] = log_probs(0, ext(1));
  for (int64_t t = 1; t < T; ++t) {
    for (int64_t s = 0; s < S; ++s) {
      double a = prev[size_t(s)];
      if (s >= 1) a = LogAdd(a, prev[size_t(s - 1)]);
      if (can_skip(s)) a = LogAdd(a, prev[size_t(s - 2)]);
      cur[size_t(s)] = a == kNegInf ? kNegInf : a + log_probs(t, ext(s));
    }
    std::swap(prev, cur);
  }
  double p = prev[size_t(S - 1)];
  if (S > 1) p = LogAdd(p, prev[size_t(S - 2)]);
  return p;
}

}  // namespace acmix
