// src/train/finetune.cc

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

#include "train/finetune.h"

#include <cmath>
#include <iostream>
#include <limits>

#include "base/errors.h"
#include "base/kernels.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "ctc/ctc-loss.h"
#include "encoder/features.h"
#include "train/adapt.h"

namespace acmix {

namespace {

enum : uint64_t { kStreamStep = 0x51ab0002 };

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

const char* FinetuneModeName(FinetuneMode m) {
  return m == FinetuneMode::kHeadFt ? "head_ft" : "full_ft";
}

FinetuneMode ParseFinetuneMode(const std::string& name) {
  if (name == "head_ft") return FinetuneMode::kHeadFt;
  if (name == "full_ft") return FinetuneMode::kFullFt;
  throw ConfigError("unknown fine-tune mode '" + name +
                    "' (want head_ft|full_ft)");
}

FinetuneResult Finetune(EncoderState* encoder,
                        const std::vector<Utterance>& labelled,
                        const LabelAlphabet& alphabet,
                        const FinetuneConfig& cfg) {
  ValidateSchedule(cfg.schedule);
  if (cfg.batch_size < 1)
    throw ConfigError("finetune: batch_size must be >= 1");

  // Admission: duration filter, then non-empty transcripts.
  std::vector<const Utterance*> admitted;
  int64_t dropped_empty = 0;
  for (const auto& u : labelled) {
    if (u.DurationSeconds() < cfg.min_duration_s) continue;
    if (u.transcript.empty()) {
      ++dropped_empty;
      continue;
    }
    admitted.push_back(&u);
  }
  if (admitted.empty())
    throw DataError("finetune: no admissible labelled utterances");
  if (dropped_empty > 0) {
    std::cerr << "[acmix] finetune: dropped " << dropped_empty
              << " utterances with empty transcripts\n";
  }
  std::vector<std::vector<int>> labels(admitted.size());
  for (size_t i = 0; i < admitted.size(); ++i) {
    try {
      labels[i] = alphabet.EncodeWords(admitted[i]->transcript);
    } catch (const DataError& e) {
      throw DataError("utterance '" + admitted[i]->id + "': " + e.what());
    }
  }

  const bool full = cfg.mode == FinetuneMode::kFullFt;
  const int lowest = LowestTrainableLayer(*encoder);
  const bool touches_encoder = full && lowest <= encoder->cfg.n_layers;

  HeadConfig hcfg;
  hcfg.in_dim = encoder->cfg.d_model;
  hcfg.hidden = cfg.head_hidden;
  hcfg.num_layers = cfg.head_layers;
  hcfg.n_out = alphabet.n_classes();
  hcfg.seed = SplitMix64(cfg.seed ^ 0xF1E7);
  HeadState head = InitHead(hcfg);

  LogMelExtractor logmel(encoder->cfg.feat);

  // Frozen prefix per utterance, computed once: the full encoder output in
  // head_ft, the input of the lowest trainable block in full_ft.
  const int prefix_blocks =
      touches_encoder ? lowest - 1 : encoder->cfg.n_layers;
  std::vector<Mat> prefix(admitted.size());
  ParallelFor(int64_t(admitted.size()), [&](int64_t i) {
    Mat feats = logmel.Compute(admitted[size_t(i)]->samples);
    prefix[size_t(i)] = EncodeUpTo(*encoder, feats, prefix_blocks);
  });

  std::map<std::string, Mat*> updated;
  for (auto& [name, m] : head.params) updated[name] = &m;
  if (touches_encoder) {
    for (int l = lowest; l <= encoder->cfg.n_layers; ++l) {
      for (const char* p : {"ln_g", "ln_b", "wx", "wh", "b"}) {
        std::string key = "layer" + std::to_string(l) + "/" + p;
        updated[key] = &encoder->params.at(key);
      }
    }
  }
  AdamOptimizer opt(cfg.adam);
  const Rng root(cfg.seed);
  const int B = cfg.batch_size;

  FinetuneResult result;
  result.admitted_utterances = int64_t(admitted.size());
  result.loss_trace.reserve(size_t(cfg.steps));

  for (int64_t step = 1; step <= cfg.steps; ++step) {
    Rng rng = root.Fork(kStreamStep, uint64_t(step));
    std::vector<int64_t> idx(static_cast<size_t>(B));
    if (int64_t(admitted.size()) >= B) {
      // Without replacement within the batch.
      std::vector<int64_t> chosen;
      while (int(chosen.size()) < B) {
        int64_t c = rng.RandInt(int64_t(admitted.size()));
        bool dup = false;
        for (int64_t v : chosen) dup = dup || v == c;
        if (!dup) chosen.push_back(c);
      }
      idx.assign(chosen.begin(), chosen.end());
    } else {
      for (int b = 0; b < B; ++b)
        idx[size_t(b)] = rng.RandInt(int64_t(admitted.size()));
    }

    std::vector<ArrayMap> slot_grads(static_cast<size_t>(B));
    std::vector<double> slot_loss(static_cast<size_t>(B), 0.0);
    std::vector<char> feasible(static_cast<size_t>(B), 0);

    ParallelFor(B, [&](int64_t b) {
      const int64_t i = idx[size_t(b)];
      EncodeCache ecache;
      Mat emb = touches_encoder
                    ? EncodeFrom(*encoder, prefix[size_t(i)], lowest, &ecache)
                    : prefix[size_t(i)];
      HeadCache hcache;
      Mat logits = HeadForward(head, emb, &hcache);
      Mat logp = logits;
      kernels::RowLogSoftmax(&logp);
      auto ctc = CtcLoss(logp, labels[size_t(i)]);
      if (!ctc.feasible) return;
      feasible[size_t(b)] = 1;
      slot_loss[size_t(b)] = ctc.loss;

      // d loss / d logits = softmax - occupancy (normalized later).
      Mat dlogits = logits;
      kernels::RowSoftmax(&dlogits);
      for (size_t j = 0; j < dlogits.data.size(); ++j) {
        dlogits.data[j] += ctc.grad_logp.data[j];
      }
      Mat demb;
      HeadBackward(head, hcache, dlogits, &slot_grads[size_t(b)],
                   touches_encoder ? &demb : nullptr);
      if (touches_encoder) {
        EncodeBackward(*encoder, ecache, demb, &slot_grads[size_t(b)]);
      }
    });

    int n_feasible = 0;
    double loss_sum = 0.0;
    for (int b = 0; b < B; ++b) {
      if (feasible[size_t(b)]) {
        ++n_feasible;
        loss_sum += slot_loss[size_t(b)];
      }
    }
    result.infeasible_utterances += B - n_feasible;
    if (n_feasible == 0) {
      result.loss_trace.push_back(std::numeric_limits<double>::infinity());
      ++result.skipped_steps;
      continue;
    }
    ArrayMap grads;
    for (int b = 0; b < B; ++b) {
      if (feasible[size_t(b)]) AccumulateInto(&grads, slot_grads[size_t(b)]);
    }
    const double inv = 1.0 / double(n_feasible);
    for (auto& [name, g] : grads) {
      for (double& v : g.data) v *= inv;
    }
    result.loss_trace.push_back(loss_sum * inv);

    if (!opt.Step(updated, grads, LrAt(cfg.schedule, step))) {
      ++result.skipped_steps;
    }
    if (touches_encoder) ++encoder->version;
  }

  if (!cfg.trace_path.empty()) {
    WriteTextFile(cfg.trace_path, FormatTrace(result.loss_trace, cfg.schedule));
  }
  if (!cfg.ckpt_path.empty()) {
    ArrayMap extra = head.params;
    for (auto& [k, v] : opt.ExportState()) extra[k] = v;
    SaveEncoderCheckpoint(cfg.ckpt_path, *encoder, extra, cfg.steps);
  }
  result.head = std::move(head);
  return result;
}

Mat CtcLogProbs(const EncoderState& encoder, const HeadState& head,
                const LogMelExtractor& logmel,
                const std::vector<double>& samples) {
  Mat feats = logmel.Compute(samples);
  Mat emb = Encode(encoder, feats);
  Mat logits = HeadForward(head, emb);
  kernels::RowLogSoftmax(&logits);
  return logits;
}

HeadState HeadFromArrays(const ArrayMap& arrays, int in_dim, int n_out) {
  HeadState head;
  int layers = 0;
  int hidden = 0;
  for (const auto& [k, v] : arrays) {
    if (k.rfind("head/", 0) != 0) continue;
    head.params[k] = v;
    if (k.rfind("head/l", 0) == 0) {
      int l = std::stoi(k.substr(6));
      layers = std::max(layers, l + 1);
    }
  }
  if (head.params.empty()) throw DataError("checkpoint has no head arrays");
  hidden = int(head.params.at("head/l0/fw/wh").rows);
  head.cfg.in_dim = in_dim;
  head.cfg.hidden = hidden;
  head.cfg.num_layers = layers;
  head.cfg.n_out = n_out;
  return head;
}

}  // namespace acmix
