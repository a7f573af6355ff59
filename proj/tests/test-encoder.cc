// tests/test-encoder.cc

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

#include "base/errors.h"
#include "encoder/encoder.h"
#include "encoder/features.h"
#include "test-util.h"

using namespace acmix;
using testutil::RandomMat;

TEST_CASE("logmel framing arithmetic") {
  FeatureConfig cfg;
  std::vector<double> one_second(16000, 0.01);
  Mat f = ComputeLogMel(one_second, cfg);
  CHECK(f.rows == 98);  // 1 + (16000 - 400) / 160
  CHECK(f.cols == 40);
  CHECK_THROWS_AS(ComputeLogMel(std::vector<double>(399, 0.0), cfg),
                  DataError);
}

TEST_CASE("logmel of silence is the log floor everywhere") {
  FeatureConfig cfg;
  Mat f = ComputeLogMel(std::vector<double>(8000, 0.0), cfg);
  const double expected = std::log(1e-10);
  for (double v : f.data) CHECK(v == expected);
}

TEST_CASE("pure tone lands in the mel bin containing its frequency") {
  // Oracle: recompute the filter centers from the mel formulas and pick the
  // filter with the largest triangle weight at the tone frequency.
  FeatureConfig cfg;
  const double tone_hz = 440.0;
  auto hz2mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  const double mel_hi = hz2mel(cfg.sample_rate / 2.0);
  const double spacing = mel_hi / (cfg.n_mels + 1);
  const double tone_mel = hz2mel(tone_hz);
  int expected = -1;
  double best_w = -1.0;
  for (int m = 1; m <= cfg.n_mels; ++m) {
    double w = 1.0 - std::abs(tone_mel / spacing - m);
    if (w > best_w) {
      best_w = w;
      expected = m - 1;  // column index
    }
  }
  REQUIRE(expected >= 0);

  std::vector<double> tone(8000);
  for (size_t t = 0; t < tone.size(); ++t) {
    tone[t] = 0.5 * std::sin(2.0 * M_PI * tone_hz * double(t) / 16000.0);
  }
  Mat f = ComputeLogMel(tone, cfg);
  for (int64_t t = 0; t < f.rows; ++t) {
    int64_t argmax = 0;
    for (int64_t m = 1; m < f.cols; ++m) {
      if (f(t, m) > f(t, argmax)) argmax = m;
    }
    CHECK(argmax == expected);
  }
}

namespace {

EncoderConfig SmallConfig() {
  EncoderConfig cfg;
  cfg.n_layers = 3;
  cfg.d_model = 16;
  cfg.feat.n_mels = 8;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("encode stride and determinism") {
  EncoderConfig cfg = SmallConfig();
  EncoderState state = InitEncoder(cfg);
  Rng rng(1);
  for (int64_t T : {1, 2, 17, 18}) {
    Mat feats = RandomMat(T, cfg.feat.n_mels, &rng);
    Mat e1 = Encode(state, feats);
    CHECK(e1.rows == (T + 1) / 2);
    CHECK(e1.cols == cfg.d_model);
    Mat e2 = Encode(state, feats);
    CHECK(e1.data == e2.data);
  }
}

TEST_CASE("encode output stays finite over fuzzed inputs") {
  EncoderConfig cfg = SmallConfig();
  EncoderState state = InitEncoder(cfg);
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    int64_t T = 1 + rng.RandInt(24);
    Mat feats = RandomMat(T, cfg.feat.n_mels, &rng, rng.Uniform(0.1, 30.0));
    Mat e = Encode(state, feats);
    CHECK(e.AllFinite());
  }
}

TEST_CASE("encode rejects corrupt state") {
  EncoderConfig cfg = SmallConfig();
  EncoderState state = InitEncoder(cfg);
  state.params["layer2/wx"](0, 0) = std::nan("");
  ++state.version;
  Rng rng(3);
  Mat feats = RandomMat(6, cfg.feat.n_mels, &rng);
  CHECK_THROWS_AS(Encode(state, feats), NumericalError);
}

TEST_CASE("set_trainable masks exactly the final blocks") {
  EncoderConfig cfg = SmallConfig();
  cfg.n_layers = 4;
  EncoderState state = InitEncoder(cfg);
  SetTrainable(&state, 2);
  CHECK(state.trainable == std::vector<bool>{false, false, true, true});
  CHECK(LowestTrainableLayer(state) == 3);
  SetTrainable(&state, 0);
  CHECK(state.trainable == std::vector<bool>{false, false, false, false});
  CHECK(LowestTrainableLayer(state) == 5);
  SetTrainable(&state, 4);
  CHECK(state.trainable == std::vector<bool>{true, true, true, true});
  CHECK_THROWS_AS(SetTrainable(&state, 5), ConfigError);
  CHECK_THROWS_AS(SetTrainable(&state, -1), ConfigError);
}

TEST_CASE("encoder parameter gradients match central finite differences") {
  EncoderConfig cfg = SmallConfig();
  EncoderState state = InitEncoder(cfg);
  SetTrainable(&state, cfg.n_layers);  // every block
  Rng rng(4);
  Mat feats = RandomMat(9, cfg.feat.n_mels, &rng);
  Mat probe = RandomMat((9 + 1) / 2, cfg.d_model, &rng);

  auto loss = [&]() {
    Mat e = Encode(state, feats);
    double s = 0.0;
    for (size_t i = 0; i < e.data.size(); ++i) s += e.data[i] * probe.data[i];
    return s;
  };

  EncodeCache cache;
  Encode(state, feats, &cache);
  ArrayMap grads;
  EncodeBackward(state, cache, probe, &grads);

  double worst = 0.0;
  for (auto& [name, g] : grads) {
    worst = std::max(
        worst, testutil::CheckGradient(&state.params.at(name), g, loss));
  }
  CHECK(worst < 1e-4);
  // All trainable parameters have gradient entries.
  CHECK(grads.size() == size_t(cfg.n_layers) * 5);
}

TEST_CASE("backward touches only trainable layers") {
  EncoderConfig cfg = SmallConfig();
  cfg.n_layers = 4;
  EncoderState state = InitEncoder(cfg);
  SetTrainable(&state, 2);
  Rng rng(5);
  Mat feats = RandomMat(10, cfg.feat.n_mels, &rng);
  EncodeCache cache;
  Encode(state, feats, &cache);
  ArrayMap grads;
  EncodeBackward(state, cache, RandomMat(5, cfg.d_model, &rng), &grads);
  for (const auto& [name, g] : grads) {
    CHECK((name.rfind("layer3/", 0) == 0 || name.rfind("layer4/", 0) == 0));
  }
  CHECK(grads.size() == 10);
}

TEST_CASE("checkpoint round trip is bit exact") {
  testutil::TempDir tmp("ckpt");
  EncoderConfig cfg = SmallConfig();
  EncoderState state = InitEncoder(cfg);
  SetTrainable(&state, 1);
  ArrayMap extra;
  Rng rng(6);
  extra["spin/prototypes"] = RandomMat(4, 3, &rng);
  const std::string path = tmp.Path("enc.ckpt");
  SaveEncoderCheckpoint(path, state, extra, 123);

  ArrayMap extra2;
  int64_t step = 0;
  EncoderState back = LoadEncoderCheckpoint(path, &extra2, &step);
  CHECK(step == 123);
  CHECK(back.cfg.n_layers == cfg.n_layers);
  CHECK(back.cfg.d_model == cfg.d_model);
  CHECK(back.trainable == state.trainable);
  REQUIRE(back.params.size() == state.params.size());
  for (const auto& [k, v] : state.params) {
    CHECK(back.params.at(k).data == v.data);
  }
  REQUIRE(extra2.size() == 1);
  CHECK(extra2.at("spin/prototypes").data == extra.at("spin/prototypes").data);
}
