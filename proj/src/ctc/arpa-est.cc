// src/ctc/arpa-est.cc

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

#include "ctc/arpa-est.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "base/errors.h"
#include "base/ndarray-io.h"

namespace acmix {

namespace {

using Gram = std::vector<std::string>;

struct GramStats {
  std::map<Gram, double> prob;     // log10 P
  std::map<Gram, double> backoff;  // log10 backoff, keyed by context
};

std::string FormatLog10(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7f", v);
  return buf;
}

}  // namespace

std::string EstimateArpa(const std::vector<std::vector<std::string>>& sentences,
                         const ArpaTrainConfig& cfg) {
  if (cfg.order < 1) throw ConfigError("arpa-est: order must be >= 1");
  if (!(cfg.discount > 0.0 && cfg.discount < 1.0))
    throw ConfigError("arpa-est: discount must be in (0, 1)");
  if (sentences.empty()) throw DataError("arpa-est: no training sentences");
  const double d = cfg.discount;

  // Counts per order over <s> ... </s> padded sentences.
  std::vector<std::map<Gram, int64_t>> counts(size_t(cfg.order));
  for (const auto& sent : sentences) {
    Gram padded;
    padded.reserve(sent.size() + 2);
    padded.push_back("<s>");
    for (const auto& w : sent) padded.push_back(w);
    padded.push_back("</s>");
    for (int n = 1; n <= cfg.order; ++n) {
      for (size_t i = 0; i + size_t(n) <= padded.size(); ++i) {
        Gram g(padded.begin() + long(i), padded.begin() + long(i + size_t(n)));
        // <s> is a context, never a predicted token.
        if (n == 1 && g[0] == "<s>") continue;
        counts[size_t(n - 1)][g] += 1;
      }
    }
  }

  std::vector<GramStats> stats(size_t(cfg.order));

  // Unigrams: absolute discounting with the exact leftover assigned to <unk>.
  {
    int64_t total = 0;
    for (const auto& [g, c] : counts[0]) total += c;
    double seen_mass = 0.0;
    for (const auto& [g, c] : counts[0]) {
      double p = (double(c) - d) / double(total);
      stats[0].prob[g] = std::log10(p);
      seen_mass += p;
    }
    stats[0].prob[{"<unk>"}] = std::log10(std::max(1.0 - seen_mass, 1e-12));
    stats[0].prob[{"<s>"}] = -99.0;  // context-only token
  }

  // Higher orders: discounted probabilities plus Katz backoff weights stored
  // on the context's lower-order entry.
  for (int n = 2; n <= cfg.order; ++n) {
    const auto& grams = counts[size_t(n - 1)];
    // grams iterate sorted, so entries sharing a context are contiguous.
    auto it = grams.begin();
    while (it != grams.end()) {
      const Gram context(it->first.begin(), it->first.end() - 1);
      auto group_end = it;
      int64_t total = 0, distinct = 0;
      double lower_seen = 0.0;
      while (group_end != grams.end() &&
             std::equal(context.begin(), context.end(),
                        group_end->first.begin()) &&
             group_end->first.size() == context.size() + 1) {
        total += group_end->second;
        distinct += 1;
        Gram lower(group_end->first.begin() + 1, group_end->first.end());
        auto lit = stats[size_t(n - 2)].prob.find(lower);
        if (lit != stats[size_t(n - 2)].prob.end()) {
          lower_seen += std::pow(10.0, lit->second);
        }
        ++group_end;
      }
      for (auto g = it; g != group_end; ++g) {
        stats[size_t(n - 1)].prob[g->first] =
            std::log10((double(g->second) - d) / double(total));
      }
      const double leftover = d * double(distinct) / double(total);
      const double denom = std::max(1.0 - lower_seen, 1e-12);
      stats[size_t(n - 2)].backoff[context] = std::log10(leftover / denom);
      it = group_end;
    }
  }

  // Emit. Section counts include entries added beyond raw counts (<s>, <unk>).
  std::string out = "\\data\\\n";
  for (int n = 1; n <= cfg.order; ++n) {
    out += "ngram " + std::to_string(n) + "=" +
           std::to_string(stats[size_t(n - 1)].prob.size()) + "\n";
  }
  for (int n = 1; n <= cfg.order; ++n) {
    out += "\n\\" + std::to_string(n) + "-grams:\n";
    for (const auto& [g, logp] : stats[size_t(n - 1)].prob) {
      out += FormatLog10(logp);
      for (const auto& w : g) out += "\t" + w;
      if (n < cfg.order) {
        auto it = stats[size_t(n - 1)].backoff.find(g);
        if (it != stats[size_t(n - 1)].backoff.end()) {
          out += "\t" + FormatLog10(it->second);
        }
      }
      out += "\n";
    }
  }
  out += "\n\\end\\\n";
  return out;
}

void EstimateArpaToFile(const std::vector<std::vector<std::string>>& sentences,
                        const ArpaTrainConfig& cfg, const std::string& path) {
  WriteTextFile(path, EstimateArpa(sentences, cfg));
}

}  // namespace acmix
