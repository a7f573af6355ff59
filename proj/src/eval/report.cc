// src/eval/report.cc

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

#include "eval/report.h"

#include <algorithm>
#include <cstdio>

#include "base/errors.h"

namespace acmix {

namespace {

// Error counts aligned by utterance id; the two reports must cover the same
// utterance set.
void AlignedErrors(const WerReport& a, const WerReport& b,
                   std::vector<int>* ea, std::vector<int>* eb) {
  std::map<std::string, int> b_err;
  for (const auto& u : b.utts) b_err[u.id] = u.Errors();
  if (b_err.size() != a.utts.size()) {
    throw DataError("compare: mismatched test sets between '" + a.label +
                    "' and '" + b.label + "'");
  }
  std::vector<std::pair<std::string, int>> a_sorted;
  for (const auto& u : a.utts) a_sorted.emplace_back(u.id, u.Errors());
  std::sort(a_sorted.begin(), a_sorted.end());
  ea->clear();
  eb->clear();
  for (const auto& [id, err] : a_sorted) {
    auto it = b_err.find(id);
    if (it == b_err.end()) {
      throw DataError("compare: utterance '" + id + "' missing from '" +
                      b.label + "'");
    }
    ea->push_back(err);
    eb->push_back(it->second);
  }
}

}  // namespace

SigResult CompareReports(const WerReport& a, const WerReport& b) {
  std::vector<int> ea, eb;
  AlignedErrors(a, b, &ea, &eb);
  return Mapsswe(ea, eb);
}

std::string FormatWerPercent(double wer_fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * wer_fraction);
  return buf;
}

RenderedReport Compare(const CompareTable& table) {
  if (table.rows.empty()) throw DataError("compare: no systems");
  if (table.baselines.size() > 2) {
    throw ConfigError("compare: at most two baselines supported");
  }
  auto find_row = [&](const std::string& label) -> const CompareRow* {
    for (const auto& r : table.rows) {
      if (r.system == label) return &r;
    }
    return nullptr;
  };
  std::vector<const CompareRow*> baseline_rows;
  for (const auto& b : table.baselines) {
    const CompareRow* row = find_row(b);
    if (row == nullptr) throw ConfigError("compare: baseline '" + b + "' not found");
    baseline_rows.push_back(row);
  }

  // A cell value plus significance superscripts vs each baseline.
  auto render_value = [&](const CompareRow& row, const std::string& group,
                          bool lm, std::vector<std::string>* sig_cols) {
    const auto cit = row.cells.find(group);
    if (cit == row.cells.end()) {
      sig_cols->assign(baseline_rows.size(), "");
      return std::string("-");
    }
    const CompareCell& cell = cit->second;
    if (lm && !cell.has_lm) {
      sig_cols->assign(baseline_rows.size(), "");
      return std::string("-");
    }
    const WerReport& rep = lm ? cell.with_lm : cell.no_lm;
    std::string value = FormatWerPercent(rep.Wer());
    bool row_is_baseline = false;
    for (const CompareRow* base : baseline_rows) row_is_baseline |= base == &row;
    std::string marks;
    sig_cols->clear();
    for (const CompareRow* base : baseline_rows) {
      if (row_is_baseline) {
        sig_cols->push_back("");
        continue;
      }
      const auto bit = base->cells.find(group);
      if (bit == base->cells.end() || (lm && !bit->second.has_lm)) {
        sig_cols->push_back("");
        continue;
      }
      const WerReport& brep = lm ? bit->second.with_lm : bit->second.no_lm;
      SigResult sig = CompareReports(rep, brep);
      const bool significant = sig.p_two_tailed < table.alpha;
      if (!marks.empty()) marks += ",";
      marks += significant ? "\xe2\x80\xa0" : "\xe2\x88\x92";  // dagger / minus
      char pbuf[32];
      std::snprintf(pbuf, sizeof(pbuf), "%.6g", sig.p_two_tailed);
      sig_cols->push_back(pbuf);
    }
    if (!marks.empty()) value += "^{" + marks + "}";
    return value;
  };

  // Markdown grid.
  std::string md;
  md += "| System |";
  for (const auto& g : table.groups) {
    md += " " + g + " test set | " + g + " +LM |";
  }
  md += "\n|---|";
  for (size_t i = 0; i < table.groups.size(); ++i) md += "---|---|";
  md += "\n";
  std::string csv =
      "system,group,column,wer_percent";
  for (const auto& b : table.baselines) csv += ",p_vs_" + b;
  csv += "\n";

  std::vector<std::string> sig;
  for (const auto& row : table.rows) {
    md += "| " + row.system + " |";
    for (const auto& g : table.groups) {
      for (bool lm : {false, true}) {
        std::string v = render_value(row, g, lm, &sig);
        md += " " + v + " |";
        csv += row.system + "," + g + "," + (lm ? "+LM" : "test_set") + "," +
               (v == "-" ? "-" : FormatWerPercent(
                                     lm ? row.cells.at(g).with_lm.Wer()
                                        : row.cells.at(g).no_lm.Wer()));
        for (const auto& p : sig) csv += "," + (p.empty() ? std::string("-") : p);
        csv += "\n";
      }
    }
    md += "\n";
  }
  if (!table.baselines.empty()) {
    char abuf[32];
    std::snprintf(abuf, sizeof(abuf), "%g", table.alpha);
    md += "\nSignificance (MAPSSWE, utterance-segment) at p=" +
          std::string(abuf) +
          ": \xe2\x80\xa0 significant, \xe2\x88\x92 not; superscripts "
          "ordered vs ";
    for (size_t i = 0; i < table.baselines.size(); ++i) {
      if (i) md += ", then ";
      md += "'" + table.baselines[i] + "'";
    }
    md += ".\n";
  }
  return {md, csv};
}

}  // namespace acmix
