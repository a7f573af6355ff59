// tests/test-eval.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "base/errors.h"
#include "base/rng.h"
#include "eval/report.h"
#include "eval/sigtest.h"
#include "eval/wer.h"

using namespace acmix;

namespace {

// Independent memoized-recursion edit distance (the oracle).
int EditDistanceOracle(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  std::map<std::pair<size_t, size_t>, int> memo;
  std::function<int(size_t, size_t)> rec = [&](size_t i, size_t j) -> int {
    if (i == a.size()) return int(b.size() - j);
    if (j == b.size()) return int(a.size() - i);
    auto key = std::make_pair(i, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int best = rec(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, rec(i + 1, j) + 1);
    best = std::min(best, rec(i, j + 1) + 1);
    memo[key] = best;
    return best;
  };
  return rec(0, 0);
}

std::vector<std::string> RandomTokens(Rng* rng, int max_len,
                                      int alphabet = 3) {
  std::vector<std::string> out;
  int len = int(rng->RandInt(max_len + 1));
  for (int i = 0; i < len; ++i) {
    out.push_back(std::string(1, char('a' + rng->RandInt(alphabet))));
  }
  return out;
}

}  // namespace

TEST_CASE("wer basic cases") {
  auto s = ScoreUtterance("u1", {"a", "b", "c"}, {"a", "b", "c"});
  CHECK(s.Errors() == 0);
  s = ScoreUtterance("u2", {"a", "b", "c"}, {"a", "x", "c"});
  CHECK(s.n_sub == 1);
  CHECK(s.n_del == 0);
  CHECK(s.n_ins == 0);
  CHECK(s.n_ref_words == 3);

  WerReport r = ComputeWer({{"u2", {"a", "b", "c"}, {"a", "x", "c"}}}, "sys");
  CHECK(r.Wer() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("wer equals the recursion oracle on random pairs") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    auto ref = RandomTokens(&rng, 8);
    auto hyp = RandomTokens(&rng, 8);
    if (ref.empty()) ref.push_back("a");
    auto s = ScoreUtterance("x", ref, hyp);
    CHECK(s.Errors() == EditDistanceOracle(ref, hyp));
    CHECK(s.n_sub >= 0);
    CHECK(s.n_del >= 0);
    CHECK(s.n_ins >= 0);
  }
}

TEST_CASE("wer is zero iff sequences are equal") {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    auto ref = RandomTokens(&rng, 6);
    auto hyp = RandomTokens(&rng, 6);
    if (ref.empty()) ref.push_back("a");
    auto s = ScoreUtterance("x", ref, hyp);
    CHECK((s.Errors() == 0) == (ref == hyp));
  }
}

TEST_CASE("wer swap symmetry: ins and del exchange roles") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto ref = RandomTokens(&rng, 7);
    auto hyp = RandomTokens(&rng, 7);
    if (ref.empty()) ref.push_back("a");
    if (hyp.empty()) hyp.push_back("b");
    auto fwd = ScoreUtterance("x", ref, hyp);
    auto rev = ScoreUtterance("x", hyp, ref);
    CHECK(fwd.Errors() == rev.Errors());
    CHECK(fwd.n_sub == rev.n_sub);
    CHECK(fwd.n_del == rev.n_ins);
    CHECK(fwd.n_ins == rev.n_del);
  }
}

TEST_CASE("aggregate wer is order invariant") {
  Rng rng(4);
  std::vector<ScoredPair> pairs;
  for (int i = 0; i < 40; ++i) {
    auto ref = RandomTokens(&rng, 6);
    if (ref.empty()) ref.push_back("a");
    pairs.push_back({"u" + std::to_string(i), ref, RandomTokens(&rng, 6)});
  }
  auto r1 = ComputeWer(pairs, "sys");
  std::reverse(pairs.begin(), pairs.end());
  auto r2 = ComputeWer(pairs, "sys");
  CHECK(r1.Wer() == r2.Wer());
  CHECK(r1.TotalErrors() == r2.TotalErrors());
}

TEST_CASE("mapsswe basic identities") {
  auto same = Mapsswe({1, 2, 3, 4}, {1, 2, 3, 4});
  CHECK(same.z == 0.0);
  CHECK(same.p_two_tailed == 1.0);
  CHECK_FALSE(same.significant_at_001);

  auto balanced = Mapsswe({2, 1, 2, 1}, {1, 2, 1, 2});
  CHECK(balanced.z == 0.0);
  CHECK(balanced.p_two_tailed == 1.0);
}

TEST_CASE("mapsswe matches the direct formula") {
  // d = [2,1,3,0,2,1,2,1] against zeros: mean = 1.5, sample sd, normal tail.
  std::vector<int> a{2, 1, 3, 0, 2, 1, 2, 1};
  std::vector<int> b(8, 0);
  auto res = Mapsswe(a, b);
  const double mean = 1.5;
  double ss = 0.0;
  for (int v : a) ss += (double(v) - mean) * (double(v) - mean);
  const double sd = std::sqrt(ss / 7.0);
  const double z = mean / (sd / std::sqrt(8.0));
  const double p = std::erfc(std::abs(z) / std::sqrt(2.0));
  CHECK(std::abs(res.z - z) < 1e-9);
  CHECK(std::abs(res.p_two_tailed - p) < 1e-9);
}

TEST_CASE("mapsswe antisymmetry and degenerate cases") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a, b;
    int n = 2 + int(rng.RandInt(30));
    for (int i = 0; i < n; ++i) {
      a.push_back(int(rng.RandInt(6)));
      b.push_back(int(rng.RandInt(6)));
    }
    auto ab = Mapsswe(a, b);
    auto ba = Mapsswe(b, a);
    CHECK(ab.z == -ba.z);
    CHECK(ab.p_two_tailed == ba.p_two_tailed);
  }
  // Zero variance, nonzero mean: p = 0 with the degenerate flag.
  auto degen = Mapsswe({2, 2, 2}, {1, 1, 1});
  CHECK(degen.degenerate);
  CHECK(degen.p_two_tailed == 0.0);
  CHECK_THROWS_AS(Mapsswe({1}, {1}), DataError);
}

namespace {

WerReport SyntheticReport(const std::string& label, uint64_t seed, int n,
                          int err_bias) {
  Rng rng(seed);
  WerReport r;
  r.label = label;
  for (int i = 0; i < n; ++i) {
    UttScore s;
    s.id = "u" + std::to_string(i);
    s.n_ref_words = 8 + int(rng.RandInt(5));
    int err = int(rng.RandInt(4)) + (int(rng.RandInt(100)) < err_bias ? 1 : 0);
    s.n_sub = err;
    r.utts.push_back(s);
  }
  return r;
}

}  // namespace

TEST_CASE("compare renders single system without superscripts") {
  CompareTable t;
  t.groups = {"full"};
  CompareRow row;
  row.system = "base";
  row.cells["full"].no_lm = SyntheticReport("base", 1, 50, 0);
  row.cells["full"].has_lm = false;
  t.rows.push_back(row);
  auto rendered = Compare(t);
  CHECK(rendered.markdown.find("^{") == std::string::npos);
  CHECK(rendered.markdown.find("| base |") != std::string::npos);
}

TEST_CASE("compare marks identical systems as not significant") {
  CompareTable t;
  t.groups = {"full"};
  auto rep = SyntheticReport("x", 2, 60, 0);
  CompareRow base{"baseline", {}};
  base.cells["full"].no_lm = rep;
  base.cells["full"].no_lm.label = "baseline";
  CompareRow sys{"candidate", {}};
  sys.cells["full"].no_lm = rep;
  sys.cells["full"].no_lm.label = "candidate";
  t.rows = {base, sys};
  t.baselines = {"baseline"};
  auto rendered = Compare(t);
  // The not-significant marker (minus sign) is attached to the candidate.
  CHECK(rendered.markdown.find("^{\xe2\x88\x92}") != std::string::npos);
}

TEST_CASE("compare rejects mismatched test sets") {
  CompareTable t;
  t.groups = {"full"};
  CompareRow base{"baseline", {}};
  base.cells["full"].no_lm = SyntheticReport("baseline", 3, 50, 0);
  CompareRow sys{"candidate", {}};
  sys.cells["full"].no_lm = SyntheticReport("candidate", 4, 49, 0);
  t.rows = {base, sys};
  t.baselines = {"baseline"};
  CHECK_THROWS_AS(Compare(t), DataError);
}

TEST_CASE("compare renders a subset grid with dual superscripts") {
  CompareTable t;
  t.groups = {"full", "5h", "1h", "10min"};
  auto make_row = [&](const std::string& name, int bias) {
    CompareRow row{name, {}};
    uint64_t s = 10;
    for (const auto& g : t.groups) {
      row.cells[g].no_lm = SyntheticReport(name, s, 80, bias);
      row.cells[g].with_lm = SyntheticReport(name, s + 1, 80, bias / 2);
      row.cells[g].has_lm = true;
      s += 2;
    }
    return row;
  };
  t.rows = {make_row("baseline", 0), make_row("spin", 20),
            make_row("acmix", 90)};
  t.baselines = {"baseline", "spin"};
  auto rendered = Compare(t);
  // 4 groups x 2 columns + system column.
  auto header_end = rendered.markdown.find('\n');
  std::string header = rendered.markdown.substr(0, header_end);
  int pipes = 0;
  for (char c : header) pipes += c == '|';
  CHECK(pipes == 2 + 8);
  // Dual superscripts on non-baseline rows.
  CHECK(rendered.markdown.find(",") != std::string::npos);
  CHECK(rendered.csv.find("p_vs_baseline") != std::string::npos);
  CHECK(rendered.csv.find("p_vs_spin") != std::string::npos);
}
