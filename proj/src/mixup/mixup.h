// src/mixup/mixup.h

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

#ifndef ACMIX_MIXUP_MIXUP_H_
#define ACMIX_MIXUP_MIXUP_H_

#include <string>
#include <vector>

#include "base/rng.h"
#include "corpus/utterance.h"

namespace acmix {

// Contrastive-mixup view generation: each training sample x gets two views
// v_n = lambda * x + (1 - lambda) * x~_n with lambda ~ U(alpha, 1), and the
// four strategies decide which domains populate the batch and supply the
// mixing partners:
//   Mixup1: batch from both domains; partners drawn from the batch itself.
//   Mixup2: batch all-target; partners drawn from the source pool.
//   Mixup3: batch all-source; partners drawn from the target pool.
//   Mixup4: like Mixup3 but one shared partner for both views (lambdas differ).
enum class MixupStrategy { kMixup1 = 1, kMixup2 = 2, kMixup3 = 3, kMixup4 = 4 };

MixupStrategy ParseMixupStrategy(const std::string& name);
const char* MixupStrategyName(MixupStrategy s);

struct MixupConfig {
  double alpha = 0.0;  // on the grid {0.0, 0.1, ..., 0.9}
  MixupStrategy strategy = MixupStrategy::kMixup3;
  bool rms_match = false;  // optionally scale the partner to the base RMS
  uint64_t seed = 0;
};

void ValidateMixupConfig(const MixupConfig& cfg);

struct MixupViewPair {
  std::vector<double> v1, v2;
  double lambda1 = 0.0, lambda2 = 0.0;
  std::string mixer1_id, mixer2_id;
  std::string base_id;
};

// lambda ~ U(alpha, 1). alpha outside [0, 0.9] is a config error.
double SampleLambda(double alpha, Rng* rng);

// Length-aligns the partner to n samples: random-offset crop when longer,
// cyclic tiling when shorter.
std::vector<double> FitLength(const std::vector<double>& x, size_t n,
                              Rng* rng);

// out[i] = lambda * x[i] + (1 - lambda) * fit(x_tilde)[i].
std::vector<double> Mix(const std::vector<double>& x,
                        const std::vector<double>& x_tilde, double lambda,
                        Rng* rng, bool rms_match = false);

// Batch composition per strategy; indices into the pools. Mixup1 samples from
// the union of both pools and guarantees both domains appear when
// batch_size >= 2; the others are single-domain.
struct BatchItem {
  Domain domain;
  int index;  // into the pool for that domain
};
std::vector<BatchItem> ComposeBatch(MixupStrategy strategy,
                                    const std::vector<Utterance>& source_pool,
                                    const std::vector<Utterance>& target_pool,
                                    int batch_size, Rng* rng);

// Two mixed views for one base utterance. For Mixup1 partners come from
// `batch` (never the base itself); otherwise from the opposite-domain pool.
MixupViewPair MakeViewPair(const Utterance& base,
                           const std::vector<const Utterance*>& batch,
                           const std::vector<Utterance>& source_pool,
                           const std::vector<Utterance>& target_pool,
                           const MixupConfig& cfg, Rng* rng);

}  // namespace acmix

#endif  // ACMIX_MIXUP_MIXUP_H_
