// tests/test-mixup.cc

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
#include <set>

#include "base/errors.h"
#include "mixup/mixup.h"
#include "test-util.h"

using namespace acmix;

namespace {

std::vector<Utterance> MakePool(Domain domain, int count, int base_len,
                                uint64_t seed, const char* prefix) {
  Rng rng(seed);
  std::vector<Utterance> pool(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    Utterance& u = pool[size_t(i)];
    u.id = std::string(prefix) + std::to_string(i);
    u.domain = domain;
    int len = base_len + int(rng.RandInt(base_len));
    u.samples.resize(size_t(len));
    for (auto& s : u.samples) s = rng.Uniform(-0.5, 0.5);
  }
  return pool;
}

double Rms(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / double(x.size()));
}

}  // namespace

TEST_CASE("sample_lambda stays in [alpha, 1) and has the uniform mean") {
  Rng rng(1);
  for (double alpha : {0.0, 0.5, 0.9}) {
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      double l = SampleLambda(alpha, &rng);
      REQUIRE(l >= alpha);
      REQUIRE(l < 1.0);
      sum += l;
    }
    // Monte-Carlo oracle: mean of U(alpha, 1) is (alpha + 1) / 2.
    CHECK(std::abs(sum / n - (alpha + 1.0) / 2.0) < 0.005);
  }
  CHECK_THROWS_AS(SampleLambda(-0.1, &rng), ConfigError);
  CHECK_THROWS_AS(SampleLambda(0.95, &rng), ConfigError);
}

TEST_CASE("mix degenerate cases and exact arithmetic") {
  Rng rng(2);
  std::vector<double> x{1.0, 0.0};
  std::vector<double> xt{0.0, 1.0};
  auto out = Mix(x, xt, 0.25, &rng);
  CHECK(out == std::vector<double>{0.25, 0.75});

  auto same = Mix(x, x, 0.37, &rng);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(same[i] == doctest::Approx(x[i]).epsilon(1e-15));
  }

  auto identity = Mix(x, xt, 1.0, &rng);
  CHECK(identity == x);

  CHECK_THROWS_AS(Mix({}, xt, 0.5, &rng), DataError);
}

TEST_CASE("fit_length crops long and tiles short") {
  Rng rng(3);
  std::vector<double> longer{1, 2, 3, 4, 5, 6, 7, 8};
  for (int trial = 0; trial < 50; ++trial) {
    auto f = FitLength(longer, 3, &rng);
    REQUIRE(f.size() == 3);
    // A crop preserves consecutive runs.
    CHECK(f[1] == f[0] + 1);
    CHECK(f[2] == f[1] + 1);
  }
  std::vector<double> shorter{1, 2, 3};
  auto t = FitLength(shorter, 8, &rng);
  CHECK(t == std::vector<double>{1, 2, 3, 1, 2, 3, 1, 2});
}

TEST_CASE("view pair lengths and lambda ranges") {
  auto src = MakePool(Domain::kSource, 6, 900, 4, "s");
  auto tgt = MakePool(Domain::kTarget, 6, 500, 5, "t");
  MixupConfig cfg;
  cfg.alpha = 0.3;
  cfg.strategy = MixupStrategy::kMixup3;
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const Utterance& base = src[size_t(rng.RandInt(6))];
    auto pair = MakeViewPair(base, {}, src, tgt, cfg, &rng);
    CHECK(pair.v1.size() == base.samples.size());
    CHECK(pair.v2.size() == base.samples.size());
    CHECK(pair.lambda1 >= 0.3);
    CHECK(pair.lambda1 < 1.0);
    CHECK(pair.lambda2 >= 0.3);
    CHECK(pair.lambda2 < 1.0);
    // Energy bound: RMS(v) <= lambda RMS(x) + (1 - lambda) RMS(fit).
    // fit is internal, but RMS(fit) <= max over crops/tiles is bounded by
    // sqrt(len(mixer) / floor-ratio); use the loose bound with the mixer's
    // max abs instead.
    double bound_rms =
        pair.lambda1 * Rms(base.samples) + (1.0 - pair.lambda1) * 0.5;
    CHECK(Rms(pair.v1) <= bound_rms + 1e-9);
  }
}

TEST_CASE("strategy semantics fuzz over 1000 batches per strategy") {
  auto src = MakePool(Domain::kSource, 20, 400, 7, "s");
  auto tgt = MakePool(Domain::kTarget, 15, 300, 8, "t");
  Rng rng(9);
  for (MixupStrategy strategy :
       {MixupStrategy::kMixup1, MixupStrategy::kMixup2, MixupStrategy::kMixup3,
        MixupStrategy::kMixup4}) {
    MixupConfig cfg;
    cfg.alpha = 0.2;
    cfg.strategy = strategy;
    int violations = 0;
    for (int b = 0; b < 1000; ++b) {
      auto batch = ComposeBatch(strategy, src, tgt, 8, &rng);
      if (batch.size() != 8) ++violations;
      bool has_src = false, has_tgt = false;
      std::vector<const Utterance*> members;
      for (const auto& item : batch) {
        const auto& pool = item.domain == Domain::kSource ? src : tgt;
        members.push_back(&pool[size_t(item.index)]);
        (item.domain == Domain::kSource ? has_src : has_tgt) = true;
      }
      switch (strategy) {
        case MixupStrategy::kMixup1:
          if (!has_src || !has_tgt) ++violations;
          break;
        case MixupStrategy::kMixup2:
          if (has_src) ++violations;
          break;
        case MixupStrategy::kMixup3:
        case MixupStrategy::kMixup4:
          if (has_tgt) ++violations;
          break;
      }
      // One pair per batch keeps the fuzz cheap; pair invariants:
      const Utterance* base = members[size_t(rng.RandInt(8))];
      auto pair = MakeViewPair(*base, members, src, tgt, cfg, &rng);
      auto domain_of = [&](const std::string& id) {
        return id[0] == 's' ? Domain::kSource : Domain::kTarget;
      };
      switch (strategy) {
        case MixupStrategy::kMixup1:
          if (pair.mixer1_id == base->id || pair.mixer2_id == base->id)
            ++violations;
          break;
        case MixupStrategy::kMixup2:
          if (base->domain != Domain::kTarget) ++violations;
          if (domain_of(pair.mixer1_id) != Domain::kSource) ++violations;
          if (domain_of(pair.mixer2_id) != Domain::kSource) ++violations;
          break;
        case MixupStrategy::kMixup3:
          if (base->domain != Domain::kSource) ++violations;
          if (domain_of(pair.mixer1_id) != Domain::kTarget) ++violations;
          if (domain_of(pair.mixer2_id) != Domain::kTarget) ++violations;
          break;
        case MixupStrategy::kMixup4:
          if (pair.mixer1_id != pair.mixer2_id) ++violations;
          if (pair.lambda1 == pair.lambda2) ++violations;
          break;
      }
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("compose_batch error paths") {
  auto src = MakePool(Domain::kSource, 3, 100, 10, "s");
  std::vector<Utterance> empty;
  Rng rng(11);
  CHECK_THROWS_AS(ComposeBatch(MixupStrategy::kMixup3, src, empty, 0, &rng),
                  ConfigError);
  CHECK_THROWS_AS(ComposeBatch(MixupStrategy::kMixup2, src, empty, 4, &rng),
                  ConfigError);
  MixupConfig cfg;
  cfg.strategy = MixupStrategy::kMixup3;
  CHECK_THROWS_AS(MakeViewPair(src[0], {}, src, empty, cfg, &rng),
                  ConfigError);
}
