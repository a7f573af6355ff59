// src/train/adapt.cc

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

#include "train/adapt.h"

#include <cstdio>

#include "base/errors.h"
#include "base/parallel.h"
#include "encoder/features.h"

namespace acmix {

namespace {

enum : uint64_t { kStreamStep = 0x51ab0001 };

void AccumulateInto(ArrayMap* total, const ArrayMap& part) {
  for (const auto& [name, g] : part) {
    auto it = total->find(name);
    if (it == total->end()) {
      (*total)[name] = g;
    } else {
      for (size_t i = 0; i < g.data.size(); ++i) it->second.data[i] += g.data[i];
    }
  }
}

}  // namespace

std::string FormatTrace(const std::vector<double>& losses,
                        const Schedule& schedule) {
  std::string out = "step,loss,lr\n";
  char buf[96];
  for (size_t i = 0; i < losses.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i + 1, losses[i],
                  LrAt(schedule, int64_t(i + 1)));
    out += buf;
  }
  return out;
}

AdaptResult Adapt(EncoderState* encoder,
                  const std::vector<Utterance>& source_pool,
                  const std::vector<Utterance>& target_pool,
                  const AdaptConfig& cfg) {
  ValidateSchedule(cfg.schedule);
  ValidateMixupConfig(cfg.mixup);
  ValidateSpinConfig(cfg.spin);
  if (cfg.batch_size < 1) throw ConfigError("adapt: batch_size must be >= 1");
  SetTrainable(encoder, cfg.last_n);

  SpinState spin = InitSpin(cfg.spin, encoder->cfg.d_model);
  AdamOptimizer opt(cfg.adam);
  LogMelExtractor logmel(encoder->cfg.feat);
  const Rng root(cfg.seed);
  const int B = cfg.batch_size;

  // One flat view of everything the optimizer updates.
  std::map<std::string, Mat*> updated;
  for (int l = 1; l <= encoder->cfg.n_layers; ++l) {
    if (!encoder->trainable[size_t(l - 1)]) continue;
    for (const char* p : {"ln_g", "ln_b", "wx", "wh", "b"}) {
      std::string key = "layer" + std::to_string(l) + "/" + p;
      updated[key] = &encoder->params.at(key);
    }
  }
  for (auto& [name, m] : spin.params) updated[name] = &m;

  AdaptResult result;
  result.loss_trace.reserve(size_t(cfg.steps));

  struct ViewWork {
    const std::vector<double>* wave = nullptr;
    Mat scores;
    Mat z, emb;
    EncodeCache ecache;
    ProjectCache pcache;
    int64_t frames = 0;
  };

  for (int64_t step = 1; step <= cfg.steps; ++step) {
    Rng rng = root.Fork(kStreamStep, uint64_t(step));
    auto batch = ComposeBatch(cfg.mixup.strategy, source_pool, target_pool, B,
                              &rng);
    std::vector<const Utterance*> members;
    members.reserve(size_t(B));
    for (const auto& item : batch) {
      const auto& pool =
          item.domain == Domain::kSource ? source_pool : target_pool;
      members.push_back(&pool[size_t(item.index)]);
    }
    std::vector<MixupViewPair> pairs;
    pairs.reserve(size_t(B));
    for (const auto* base : members) {
      pairs.push_back(MakeViewPair(*base, members, source_pool, target_pool,
                                   cfg.mixup, &rng));
    }

    // Forward both views of every utterance in parallel.
    std::vector<ViewWork> work(size_t(2 * B));
    for (int b = 0; b < B; ++b) {
      work[size_t(b)].wave = &pairs[size_t(b)].v1;
      work[size_t(B + b)].wave = &pairs[size_t(b)].v2;
    }
    ParallelFor(2 * B, [&](int64_t i) {
      ViewWork& w = work[size_t(i)];
      Mat feats = logmel.Compute(*w.wave);
      w.emb = Encode(*encoder, feats, &w.ecache);
      w.z = Project(spin, w.emb, &w.pcache);
      w.scores = Scores(spin, w.z);
      w.frames = w.scores.rows;
    });

    // Pool frames: view-1 rows then view-2 rows, batch order.
    int64_t n_frames = 0;
    for (int b = 0; b < B; ++b) n_frames += work[size_t(b)].frames;
    const int K = cfg.spin.n_clusters;
    Mat s1(n_frames, K), s2(n_frames, K);
    {
      int64_t row = 0;
      for (int b = 0; b < B; ++b) {
        const Mat& a = work[size_t(b)].scores;
        const Mat& c = work[size_t(B + b)].scores;
        std::copy(a.data.begin(), a.data.end(), s1.RowPtr(row));
        std::copy(c.data.begin(), c.data.end(), s2.RowPtr(row));
        row += a.rows;
      }
    }
    // Equal partition enforced over both views pooled together.
    Mat pooled(2 * n_frames, K);
    std::copy(s1.data.begin(), s1.data.end(), pooled.RowPtr(0));
    std::copy(s2.data.begin(), s2.data.end(), pooled.RowPtr(n_frames));
    Mat codes = AssignCodes(pooled, cfg.spin);
    Mat q1(n_frames, K), q2(n_frames, K);
    std::copy(codes.RowPtr(0), codes.RowPtr(n_frames), q1.data.data());
    std::copy(codes.RowPtr(n_frames), codes.RowPtr(2 * n_frames),
              q2.data.data());

    auto res = SwappedLoss(s1, s2, q1, q2);
    result.loss_trace.push_back(res.loss);

    // Backward per view-utterance into per-slot gradient buffers, then a
    // serial ordered reduction (bit-deterministic for any thread count).
    std::vector<ArrayMap> slot_grads(size_t(2 * B));
    {
      std::vector<int64_t> offsets(size_t(B) + 1, 0);
      for (int b = 0; b < B; ++b) {
        offsets[size_t(b) + 1] = offsets[size_t(b)] + work[size_t(b)].frames;
      }
      ParallelFor(2 * B, [&](int64_t i) {
        const int b = int(i % B);
        const bool second = i >= B;
        ViewWork& w = work[size_t(i)];
        const Mat& ds_all = second ? res.ds2 : res.ds1;
        Mat ds(w.frames, K);
        std::copy(ds_all.RowPtr(offsets[size_t(b)]),
                  ds_all.RowPtr(offsets[size_t(b)] + w.frames),
                  ds.data.data());
        ArrayMap& grads = slot_grads[size_t(i)];
        Mat dz = ScoresBackward(spin, w.z, ds, &grads);
        Mat de = ProjectBackward(spin, w.emb, w.pcache, dz, &grads);
        EncodeBackward(*encoder, w.ecache, de, &grads);
      });
    }
    ArrayMap grads;
    for (const auto& slot : slot_grads) AccumulateInto(&grads, slot);

    const double lr = LrAt(cfg.schedule, step);
    if (opt.Step(updated, grads, lr)) {
      RenormalizePrototypes(&spin);
    } else {
      ++result.skipped_steps;
    }
    ++encoder->version;
  }

  if (!cfg.trace_path.empty()) {
    WriteTextFile(cfg.trace_path, FormatTrace(result.loss_trace, cfg.schedule));
  }
  if (!cfg.ckpt_path.empty()) {
    SaveEncoderCheckpoint(cfg.ckpt_path, *encoder, spin.params, cfg.steps);
  }
  result.spin = std::move(spin);
  return result;
}

}  // namespace acmix
