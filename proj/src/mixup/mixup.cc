// src/mixup/mixup.cc

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

#include "mixup/mixup.h"

#include <cmath>

#include "base/errors.h"

namespace acmix {

MixupStrategy ParseMixupStrategy(const std::string& name) {
  if (name == "mixup1") return MixupStrategy::kMixup1;
  if (name == "mixup2") return MixupStrategy::kMixup2;
  if (name == "mixup3") return MixupStrategy::kMixup3;
  if (name == "mixup4") return MixupStrategy::kMixup4;
  throw ConfigError("unknown mixup strategy '" + name +
                    "' (want mixup1|mixup2|mixup3|mixup4)");
}

const char* MixupStrategyName(MixupStrategy s) {
  switch (s) {
    case MixupStrategy::kMixup1:
      return "mixup1";
    case MixupStrategy::kMixup2:
      return "mixup2";
    case MixupStrategy::kMixup3:
      return "mixup3";
    case MixupStrategy::kMixup4:
      return "mixup4";
  }
  return "?";
}

void ValidateMixupConfig(const MixupConfig& cfg) {
  // alpha must sit on the 0.1 grid in [0, 0.9].
  double scaled = cfg.alpha * 10.0;
  if (cfg.alpha < 0.0 || cfg.alpha > 0.9 ||
      std::abs(scaled - std::round(scaled)) > 1e-9) {
    throw ConfigError("mixup alpha must be one of {0.0, 0.1, ..., 0.9}, got " +
                      std::to_string(cfg.alpha));
  }
}

double SampleLambda(double alpha, Rng* rng) {
  if (alpha < 0.0 || alpha > 0.9) {
    throw ConfigError("lambda sampler: alpha out of [0, 0.9]: " +
                      std::to_string(alpha));
  }
  return rng->Uniform(alpha, 1.0);
}

std::vector<double> FitLength(const std::vector<double>& x, size_t n,
                              Rng* rng) {
  if (x.size() == n) return x;
  std::vector<double> out(n);
  if (x.size() > n) {
    size_t offset = size_t(rng->RandInt(int64_t(x.size() - n + 1)));
    std::copy(x.begin() + offset, x.begin() + offset + n, out.begin());
  } else {
    for (size_t i = 0; i < n; ++i) out[i] = x[i % x.size()];
  }
  return out;
}

std::vector<double> Mix(const std::vector<double>& x,
                        const std::vector<double>& x_tilde, double lambda,
                        Rng* rng, bool rms_match) {
  if (x.empty()) throw DataError("mix: base signal is empty");
  std::vector<double> fit = FitLength(x_tilde, x.size(), rng);
  double scale = 1.0;
  if (rms_match) {
    double rx = 0.0, rf = 0.0;
    for (double v : x) rx += v * v;
    for (double v : fit) rf += v * v;
    if (rf > 0.0) scale = std::sqrt(rx / rf);
  }
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = lambda * x[i] + (1.0 - lambda) * scale * fit[i];
  }
  return out;
}

namespace {

const Utterance* PickOther(const std::vector<const Utterance*>& batch,
                           const std::string& base_id, Rng* rng) {
  // Self-mixing is excluded: the partner is always a different utterance.
  int candidates = 0;
  for (const auto* u : batch)
    if (u->id != base_id) ++candidates;
  if (candidates == 0)
    throw ConfigError("mixup1: batch has no partner other than the base");
  for (;;) {
    const Utterance* u = batch[size_t(rng->RandInt(int64_t(batch.size())))];
    if (u->id != base_id) return u;
  }
}

const Utterance* PickFromPool(const std::vector<Utterance>& pool,
                              const char* pool_name, Rng* rng) {
  if (pool.empty())
    throw ConfigError(std::string("mixup: required ") + pool_name +
                      " pool is empty");
  return &pool[size_t(rng->RandInt(int64_t(pool.size())))];
}

}  // namespace

std::vector<BatchItem> ComposeBatch(MixupStrategy strategy,
                                    const std::vector<Utterance>& source_pool,
                                    const std::vector<Utterance>& target_pool,
                                    int batch_size, Rng* rng) {
  if (batch_size <= 0)
    throw ConfigError("compose_batch: batch_size must be positive");
  std::vector<BatchItem> batch;
  batch.reserve(size_t(batch_size));
  auto need = [&](const std::vector<Utterance>& pool, const char* name) {
    if (pool.empty())
      throw ConfigError(std::string("compose_batch: required ") + name +
                        " pool is empty");
  };
  switch (strategy) {
    case MixupStrategy::kMixup1: {
      need(source_pool, "source");
      need(target_pool, "target");
      int64_t total = int64_t(source_pool.size() + target_pool.size());
      for (int i = 0; i < batch_size; ++i) {
        int64_t r = rng->RandInt(total);
        if (r < int64_t(source_pool.size())) {
          batch.push_back({Domain::kSource, int(r)});
        } else {
          batch.push_back({Domain::kTarget, int(r - int64_t(source_pool.size()))});
        }
      }
      if (batch_size >= 2) {
        // Guarantee both domains are present.
        bool has_src = false, has_tgt = false;
        for (const auto& b : batch) {
          (b.domain == Domain::kSource ? has_src : has_tgt) = true;
        }
        if (!has_src) {
          batch[size_t(rng->RandInt(batch_size))] = {
              Domain::kSource, int(rng->RandInt(int64_t(source_pool.size())))};
        } else if (!has_tgt) {
          batch[size_t(rng->RandInt(batch_size))] = {
              Domain::kTarget, int(rng->RandInt(int64_t(target_pool.size())))};
        }
      }
      break;
    }
    case MixupStrategy::kMixup2:
      need(target_pool, "target");
      for (int i = 0; i < batch_size; ++i) {
        batch.push_back(
            {Domain::kTarget, int(rng->RandInt(int64_t(target_pool.size())))});
      }
      break;
    case MixupStrategy::kMixup3:
    case MixupStrategy::kMixup4:
      need(source_pool, "source");
      for (int i = 0; i < batch_size; ++i) {
        batch.push_back(
            {Domain::kSource, int(rng->RandInt(int64_t(source_pool.size())))});
      }
      break;
  }
  return batch;
}

MixupViewPair MakeViewPair(const Utterance& base,
                           const std::vector<const Utterance*>& batch,
                           const std::vector<Utterance>& source_pool,
                           const std::vector<Utterance>& target_pool,
                           const MixupConfig& cfg, Rng* rng) {
  ValidateMixupConfig(cfg);
  const Utterance* m1 = nullptr;
  const Utterance* m2 = nullptr;
  switch (cfg.strategy) {
    case MixupStrategy::kMixup1:
      m1 = PickOther(batch, base.id, rng);
      m2 = PickOther(batch, base.id, rng);
      break;
    case MixupStrategy::kMixup2:
      m1 = PickFromPool(source_pool, "source", rng);
      m2 = PickFromPool(source_pool, "source", rng);
      break;
    case MixupStrategy::kMixup3:
      m1 = PickFromPool(target_pool, "target", rng);
      m2 = PickFromPool(target_pool, "target", rng);
      break;
    case MixupStrategy::kMixup4:
      m1 = PickFromPool(target_pool, "target", rng);
      m2 = m1;  // same partner in both views; lambdas stay independent
      break;
  }
  MixupViewPair pair;
  pair.base_id = base.id;
  pair.mixer1_id = m1->id;
  pair.mixer2_id = m2->id;
  pair.lambda1 = SampleLambda(cfg.alpha, rng);
  pair.lambda2 = SampleLambda(cfg.alpha, rng);
  pair.v1 = Mix(base.samples, m1->samples, pair.lambda1, rng, cfg.rms_match);
  pair.v2 = Mix(base.samples, m2->samples, pair.lambda2, rng, cfg.rms_match);
  return pair;
}

}  // namespace acmix
