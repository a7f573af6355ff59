// src/cli/pipeline.cc

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

#include "cli/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <json.hpp>

#include "base/errors.h"
#include "base/ndarray-io.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "corpus/text-norm.h"
#include "corpus/wav-io.h"
#include "ctc/arpa-est.h"
#include "ctc/arpa-lm.h"
#include "ctc/ctc-loss.h"
#include "ctc/decoder.h"
#include "encoder/features.h"
#include "train/adapt.h"
#include "train/finetune.h"

namespace acmix {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum : uint64_t { kStreamSubset = 0x51ab0003 };

std::string AlphaTag(double alpha) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "a%.1f", alpha);
  return buf;
}

LabelAlphabet TheAlphabet() { return LabelAlphabet::Chars(); }

EncoderConfig EncoderCfg(const ExperimentConfig& cfg) {
  EncoderConfig ecfg;
  ecfg.n_layers = cfg.enc_layers;
  ecfg.d_model = cfg.enc_d_model;
  ecfg.feat.n_mels = cfg.enc_n_mels;
  ecfg.seed = cfg.seed;
  return ecfg;
}

std::string ArpaPath(const ExperimentConfig& cfg) {
  return cfg.arpa_path.empty() ? cfg.corpus_dir + "/lm.arpa" : cfg.arpa_path;
}

}  // namespace

RunContext::RunContext(const ExperimentConfig& cfg, const std::string& run_dir)
    : cfg_(cfg), dir_(run_dir) {
  fs::create_directories(dir_);
  WriteTextFile(Path("config.ini"), RenderConfig(cfg_));
}

void RunContext::LogAccess(const std::string& purpose,
                           const std::string& path) {
  std::ofstream os(Path("access.log"), std::ios::app);
  os << purpose << "\t" << path << "\n";
}

int RunContext::CountAccesses(const std::string& purpose,
                              const std::string& path) const {
  std::ifstream is(Path("access.log"));
  if (!is) return 0;
  std::string line;
  int count = 0;
  const std::string want = purpose + "\t" + path;
  while (std::getline(is, line)) {
    if (line == want) ++count;
  }
  return count;
}

std::string MakeRunDir(const ExperimentConfig& cfg,
                       const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  const char* env_root = std::getenv("ACMIX_RUN_ROOT");
  std::string root = env_root != nullptr ? env_root : cfg.run_root;
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", std::localtime(&t));
  std::string base = root + "/" + cfg.name + "-" + stamp;
  std::string dir = base;
  for (int i = 1; fs::exists(dir); ++i) {
    dir = base + "-" + std::to_string(i);
  }
  return dir;
}

CorpusPaths ManifestPaths(const ExperimentConfig& cfg) {
  if (cfg.corpus_kind == "external") {
    return {cfg.source_manifest, cfg.target_train_manifest,
            cfg.target_valid_manifest, cfg.target_test_manifest};
  }
  return {cfg.corpus_dir + "/source.jsonl",
          cfg.corpus_dir + "/target_train.jsonl",
          cfg.corpus_dir + "/target_valid.jsonl",
          cfg.corpus_dir + "/target_test.jsonl"};
}

namespace {

void WriteSplit(const ExperimentConfig& cfg, const std::vector<Utterance>& utts,
                const std::string& manifest_path) {
  CorpusManifest m;
  m.dir = cfg.corpus_dir;
  for (const auto& u : utts) {
    WriteWav(cfg.corpus_dir + "/wav/" + u.id + ".wav", u.samples);
    ManifestEntry e;
    e.id = u.id;
    e.audio = "wav/" + u.id + ".wav";
    e.duration_s = u.DurationSeconds();
    e.domain = u.domain;
    e.text = JoinTokens(u.transcript);
    m.entries.push_back(std::move(e));
  }
  WriteManifest(manifest_path, m);
}

}  // namespace

void GenCorpus(const ExperimentConfig& cfg, bool force) {
  if (cfg.corpus_kind != "synth") return;
  CorpusPaths paths = ManifestPaths(cfg);
  if (!force && fs::exists(paths.source) && fs::exists(paths.train) &&
      fs::exists(paths.valid) && fs::exists(paths.test) &&
      fs::exists(ArpaPath(cfg))) {
    return;
  }
  fs::create_directories(cfg.corpus_dir + "/wav");

  int64_t offset = 0;
  SynthSpec source_spec = cfg.synth;
  if (cfg.source_words_min > 0) {
    source_spec.words_min = cfg.source_words_min;
    source_spec.words_max = cfg.source_words_max;
  }
  auto source = SynthCorpus(source_spec, Domain::kSource, cfg.source_count,
                            offset, "src-");
  offset += cfg.source_count;
  auto train = SynthCorpus(cfg.synth, Domain::kTarget, cfg.target_train_count,
                           offset, "tgt-train-");
  offset += cfg.target_train_count;
  auto valid = SynthCorpus(cfg.synth, Domain::kTarget, cfg.target_valid_count,
                           offset, "tgt-valid-");
  offset += cfg.target_valid_count;
  auto test = SynthCorpus(cfg.synth, Domain::kTarget, cfg.target_test_count,
                          offset, "tgt-test-");

  WriteSplit(cfg, source, paths.source);
  WriteSplit(cfg, train, paths.train);
  WriteSplit(cfg, valid, paths.valid);
  WriteSplit(cfg, test, paths.test);

  // Word n-gram LM for shallow fusion, trained on the target-train text.
  std::vector<std::vector<std::string>> sentences;
  for (const auto& u : train) {
    if (!u.transcript.empty()) sentences.push_back(u.transcript);
  }
  ArpaTrainConfig lm_cfg;
  lm_cfg.order = cfg.lm_order;
  EstimateArpaToFile(sentences, lm_cfg, ArpaPath(cfg));
}

void EnsureCorpus(const ExperimentConfig& cfg) { GenCorpus(cfg, false); }

namespace {

std::vector<Utterance> LoadSplit(RunContext* ctx, const std::string& purpose,
                                 const std::string& manifest_path,
                                 Split split) {
  ctx->LogAccess(purpose, manifest_path);
  CorpusManifest m = ReadManifest(manifest_path, split, /*check_audio=*/false);
  return LoadUtterances(m);
}

}  // namespace

std::string AdaptStage(RunContext* ctx, double alpha, const std::string& tag) {
  const ExperimentConfig& cfg = ctx->cfg();
  CorpusPaths paths = ManifestPaths(cfg);
  auto source = LoadSplit(ctx, "adapt-data", paths.source, Split::kTrain);
  auto target = LoadSplit(ctx, "adapt-data", paths.train, Split::kTrain);

  EncoderState encoder = InitEncoder(EncoderCfg(cfg));
  AdaptConfig acfg;
  acfg.steps = cfg.adapt_steps;
  acfg.batch_size = cfg.adapt_batch;
  acfg.last_n = cfg.last_n;
  acfg.schedule = Schedule{cfg.adapt_warmup, cfg.adapt_steps, cfg.adapt_peak_lr,
                           cfg.adapt_final_lr};
  acfg.mixup = cfg.mixup;
  acfg.mixup.alpha = alpha;
  acfg.spin = cfg.spin;
  acfg.spin.seed = SplitMix64(cfg.seed ^ 0x5917);
  acfg.adam.clip_norm = cfg.clip_norm;
  acfg.seed = SplitMix64(cfg.seed ^ 0xADA7);
  acfg.trace_path = ctx->Path("adapt-" + tag + "-trace.csv");
  acfg.ckpt_path = ctx->Path("adapt-" + tag + ".ckpt");
  Adapt(&encoder, source, target, acfg);
  return acfg.ckpt_path;
}

FinetuneStageResult FinetuneStage(RunContext* ctx,
                                  const std::string& encoder_ckpt,
                                  const std::string& subset,
                                  const std::string& tag,
                                  const std::string& mode_override,
                                  int64_t steps_override) {
  const ExperimentConfig& cfg = ctx->cfg();
  CorpusPaths paths = ManifestPaths(cfg);
  auto train = LoadSplit(ctx, "finetune-data", paths.train, Split::kTrain);

  // Nested subset: one seed-determined shuffle shared by every subset size.
  const double fraction = SubsetFraction(subset);
  if (fraction < 1.0) {
    std::vector<int64_t> order(train.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int64_t(i);
    Rng rng = Rng(cfg.seed).Fork(kStreamSubset);
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[size_t(rng.RandInt(int64_t(i)))]);
    }
    const size_t keep = size_t(
        std::max<int64_t>(1, llround(fraction * double(train.size()))));
    std::vector<Utterance> subset_utts;
    subset_utts.reserve(keep);
    for (size_t i = 0; i < keep; ++i) {
      subset_utts.push_back(std::move(train[size_t(order[i])]));
    }
    train = std::move(subset_utts);
  }

  EncoderState encoder;
  if (encoder_ckpt.empty()) {
    encoder = InitEncoder(EncoderCfg(cfg));
    SetTrainable(&encoder, cfg.last_n);
  } else {
    encoder = LoadEncoderCheckpoint(encoder_ckpt);
  }

  FinetuneConfig fcfg;
  fcfg.mode = ParseFinetuneMode(mode_override.empty() ? cfg.ft_mode
                                                      : mode_override);
  const int64_t base_steps =
      steps_override > 0 ? steps_override : cfg.ft_steps;
  fcfg.steps = std::max<int64_t>(
      int64_t(2), llround(double(base_steps) * SubsetStepRatio(subset)));
  fcfg.batch_size = cfg.ft_batch;
  fcfg.schedule =
      Schedule{std::max<int64_t>(1, llround(double(cfg.ft_warmup) *
                                            SubsetStepRatio(subset))),
               fcfg.steps, cfg.ft_peak_lr, cfg.ft_final_lr};
  fcfg.head_hidden = cfg.head_hidden;
  fcfg.head_layers = cfg.head_layers;
  fcfg.adam.clip_norm = cfg.clip_norm;
  fcfg.seed = SplitMix64(cfg.seed ^ 0xF17E);
  fcfg.min_duration_s = cfg.min_duration_s;
  fcfg.trace_path = ctx->Path("ft-" + tag + "-trace.csv");
  fcfg.ckpt_path = ctx->Path("ft-" + tag + ".ckpt");
  Finetune(&encoder, train, TheAlphabet(), fcfg);
  return {fcfg.ckpt_path, fcfg.steps};
}

DecodeStageResult DecodeStage(RunContext* ctx, const std::string& ckpt,
                              const std::string& manifest_path, bool with_lm,
                              const std::string& tag) {
  const ExperimentConfig& cfg = ctx->cfg();
  auto utts = LoadSplit(ctx, "decode", manifest_path, Split::kTest);

  ArrayMap extra;
  EncoderState encoder = LoadEncoderCheckpoint(ckpt, &extra);
  LabelAlphabet alphabet = TheAlphabet();
  HeadState head =
      HeadFromArrays(extra, encoder.cfg.d_model, alphabet.n_classes());
  LogMelExtractor logmel(encoder.cfg.feat);

  ArpaLm lm;
  if (with_lm) lm = ArpaLm::FromFile(ArpaPath(cfg));
  BeamConfig bcfg;
  bcfg.beam = cfg.beam;
  bcfg.lm_weight = cfg.lm_weight;
  bcfg.word_bonus = cfg.word_bonus;

  struct Hyp {
    std::string text;
    double score;
  };
  std::vector<Hyp> greedy(utts.size());
  std::vector<Hyp> fused(with_lm ? utts.size() : 0);
  ParallelFor(int64_t(utts.size()), [&](int64_t i) {
    Mat logp = CtcLogProbs(encoder, head, logmel, utts[size_t(i)].samples);
    auto labels = GreedyDecode(logp);
    greedy[size_t(i)] = {alphabet.LabelsToText(labels),
                         LabelingLogProb(logp, labels)};
    if (with_lm) {
      BeamResult r = BeamDecode(logp, alphabet, &lm, bcfg);
      fused[size_t(i)] = {alphabet.LabelsToText(r.labels), r.score};
    }
  });

  auto write_hyps = [&](const std::vector<Hyp>& hyps,
                        const std::string& path) {
    std::string out;
    for (size_t i = 0; i < hyps.size(); ++i) {
      json j;
      j["id"] = utts[i].id;
      j["hyp_text"] = hyps[i].text;
      j["score"] = hyps[i].score;
      out += j.dump() + "\n";
    }
    WriteTextFile(path, out);
  };
  DecodeStageResult res;
  res.greedy_hyps = ctx->Path("hyps-" + tag + "-greedy.jsonl");
  write_hyps(greedy, res.greedy_hyps);
  if (with_lm) {
    res.lm_hyps = ctx->Path("hyps-" + tag + "-lm.jsonl");
    write_hyps(fused, res.lm_hyps);
  }
  return res;
}

WerReport EvaluateStage(RunContext* ctx, const std::string& hyps_path,
                        const std::string& manifest_path,
                        const std::string& label) {
  ctx->LogAccess("evaluate", manifest_path);
  CorpusManifest m =
      ReadManifest(manifest_path, Split::kTest, /*check_audio=*/false);
  std::map<std::string, std::vector<std::string>> refs;
  for (const auto& e : m.entries) refs[e.id] = NormalizeTranscript(e.text);

  std::ifstream is(hyps_path);
  if (!is) throw DataError("cannot open hypotheses: " + hyps_path);
  std::vector<ScoredPair> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    ScoredPair p;
    p.id = j.at("id").get<std::string>();
    auto it = refs.find(p.id);
    if (it == refs.end()) {
      throw DataError("evaluate: hypothesis id '" + p.id +
                      "' not in reference manifest");
    }
    p.ref = it->second;
    p.hyp = NormalizeTranscript(j.at("hyp_text").get<std::string>());
    pairs.push_back(std::move(p));
    refs.erase(it);
  }
  if (!refs.empty()) {
    throw DataError("evaluate: " + std::to_string(refs.size()) +
                    " references lack hypotheses (first: '" +
                    refs.begin()->first + "')");
  }
  WerReport report = ComputeWer(pairs, label);
  WriteEvalCsv(ctx->Path("eval-" + label + ".csv"), report);
  return report;
}

void WriteEvalCsv(const std::string& path, const WerReport& report) {
  std::string out = "id,n_ref_words,n_sub,n_del,n_ins\n";
  for (const auto& u : report.utts) {
    out += u.id + "," + std::to_string(u.n_ref_words) + "," +
           std::to_string(u.n_sub) + "," + std::to_string(u.n_del) + "," +
           std::to_string(u.n_ins) + "\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "# aggregate_wer_percent,%.4f",
                100.0 * report.Wer());
  out += std::string(buf) + "\n";
  WriteTextFile(path, out);
}

WerReport ReadEvalCsv(const std::string& path, const std::string& label) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open eval csv: " + path);
  WerReport r;
  r.label = label;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    UttScore s;
    char id[256];
    if (std::sscanf(line.c_str(), "%255[^,],%d,%d,%d,%d", id, &s.n_ref_words,
                    &s.n_sub, &s.n_del, &s.n_ins) != 5) {
      throw DataError("bad eval csv line: " + line);
    }
    s.id = id;
    r.utts.push_back(std::move(s));
  }
  return r;
}

PipelineResult RunPipeline(const ExperimentConfig& cfg,
                           const std::string& explicit_run_dir) {
  EnsureCorpus(cfg);
  RunContext ctx(cfg, MakeRunDir(cfg, explicit_run_dir));
  CorpusPaths paths = ManifestPaths(cfg);

  std::string adapt_ckpt;
  std::string system = cfg.adaptation;
  if (cfg.adaptation == "acmix") {
    adapt_ckpt = AdaptStage(&ctx, cfg.mixup.alpha, AlphaTag(cfg.mixup.alpha));
  }
  auto ft = FinetuneStage(&ctx, adapt_ckpt, cfg.subset, "main");
  const bool with_lm = fs::exists(ArpaPath(cfg));
  auto decoded = DecodeStage(&ctx, ft.ckpt, paths.test, with_lm, "test");

  PipelineResult result;
  result.run_dir = ctx.dir();
  result.has_lm = with_lm;
  result.test_no_lm =
      EvaluateStage(&ctx, decoded.greedy_hyps, paths.test, system + "-test");
  CompareTable table;
  table.groups = {cfg.subset};
  CompareRow row;
  row.system = system;
  row.cells[cfg.subset].no_lm = result.test_no_lm;
  if (with_lm) {
    result.test_lm =
        EvaluateStage(&ctx, decoded.lm_hyps, paths.test, system + "-test-lm");
    row.cells[cfg.subset].with_lm = result.test_lm;
    row.cells[cfg.subset].has_lm = true;
  }
  table.rows.push_back(std::move(row));
  RenderedReport rendered = Compare(table);
  WriteTextFile(ctx.Path("report.md"), rendered.markdown);
  WriteTextFile(ctx.Path("report.csv"), rendered.csv);
  return result;
}

SweepAlphaResult SweepAlpha(const ExperimentConfig& cfg,
                            const std::string& explicit_run_dir) {
  if (cfg.sweep_alphas.empty()) throw ConfigError("sweep: empty alpha list");
  EnsureCorpus(cfg);
  RunContext ctx(cfg, MakeRunDir(cfg, explicit_run_dir));
  CorpusPaths paths = ManifestPaths(cfg);

  std::vector<double> alphas = cfg.sweep_alphas;
  std::sort(alphas.begin(), alphas.end());

  SweepAlphaResult result;
  result.run_dir = ctx.dir();
  // Selection fine-tunes may run cheaper than the final system (the [sweep]
  // overrides); adaptation checkpoints are reused either way.
  const std::string sel_mode = cfg.sweep_ft_mode;
  const int64_t sel_steps = cfg.sweep_ft_steps;
  const bool selection_is_final =
      (sel_mode.empty() || sel_mode == cfg.ft_mode) &&
      (sel_steps == 0 || sel_steps == cfg.ft_steps);
  std::map<std::string, std::string> ft_ckpts;
  std::map<std::string, std::string> adapt_ckpts;
  double best_wer = std::numeric_limits<double>::infinity();
  for (double alpha : alphas) {
    const std::string tag = AlphaTag(alpha);
    std::string adapt_ckpt = AdaptStage(&ctx, alpha, tag);
    adapt_ckpts[tag] = adapt_ckpt;
    auto ft = FinetuneStage(&ctx, adapt_ckpt, cfg.subset,
                            selection_is_final ? tag : tag + "-sel", sel_mode,
                            sel_steps);
    ft_ckpts[tag] = ft.ckpt;
    // Validation-only decode, greedy (the test split is untouched here).
    auto decoded = DecodeStage(&ctx, ft.ckpt, paths.valid, false, tag + "-valid");
    WerReport rep =
        EvaluateStage(&ctx, decoded.greedy_hyps, paths.valid, tag + "-valid");
    const double wer = rep.Wer();
    result.valid_wer.emplace_back(alpha, wer);
    if (wer < best_wer) {
      best_wer = wer;
      result.chosen_alpha = alpha;
    } else if (wer == best_wer) {
      result.tie = true;  // kept the smaller alpha
    }
  }

  const std::string chosen_tag = AlphaTag(result.chosen_alpha);
  std::string final_ckpt = ft_ckpts.at(chosen_tag);
  if (!selection_is_final) {
    auto ft = FinetuneStage(&ctx, adapt_ckpts.at(chosen_tag), cfg.subset,
                            chosen_tag);
    final_ckpt = ft.ckpt;
  }

  // The single test decode, by the selected alpha.
  const bool with_lm = fs::exists(ArpaPath(cfg));
  auto decoded = DecodeStage(&ctx, final_ckpt, paths.test, with_lm, "test");
  result.test_no_lm =
      EvaluateStage(&ctx, decoded.greedy_hyps, paths.test, "acmix-test");
  result.has_lm = with_lm;
  if (with_lm) {
    result.test_lm =
        EvaluateStage(&ctx, decoded.lm_hyps, paths.test, "acmix-test-lm");
  }
  if (ctx.CountAccesses("decode", paths.test) != 1) {
    throw NumericalError("sweep hygiene violated: test manifest decoded " +
                         std::to_string(ctx.CountAccesses("decode", paths.test)) +
                         " times");
  }

  // Summary artifact.
  std::string md = "| alpha | validation WER |\n|---|---|\n";
  for (const auto& [alpha, wer] : result.valid_wer) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "| %.1f | %s |\n", alpha,
                  FormatWerPercent(wer).c_str());
    md += buf;
  }
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "\nchosen alpha: %.1f%s\ntest WER: %s%s%s\n",
                  result.chosen_alpha,
                  result.tie ? " (tie broken toward the smaller alpha)" : "",
                  FormatWerPercent(result.test_no_lm.Wer()).c_str(),
                  with_lm ? " / +LM " : "",
                  with_lm ? FormatWerPercent(result.test_lm.Wer()).c_str() : "");
    md += buf;
  }
  WriteTextFile(ctx.Path("sweep-summary.md"), md);
  return result;
}

AblationResult SubsetAblation(const ExperimentConfig& cfg,
                              const std::string& explicit_run_dir) {
  EnsureCorpus(cfg);
  RunContext ctx(cfg, MakeRunDir(cfg, explicit_run_dir));
  CorpusPaths paths = ManifestPaths(cfg);
  const std::vector<std::string> subsets{"full", "5h", "1h", "10min"};

  // Adapt once; reuse across every subset.
  std::string adapt_ckpt =
      AdaptStage(&ctx, cfg.mixup.alpha, AlphaTag(cfg.mixup.alpha));
  const bool with_lm = fs::exists(ArpaPath(cfg));

  CompareTable table;
  table.groups = subsets;
  table.baselines = {"no-adapt"};
  for (const std::string& system : {std::string("no-adapt"), std::string("acmix")}) {
    CompareRow row;
    row.system = system;
    for (const auto& subset : subsets) {
      const std::string tag = system + "-" + subset;
      auto ft = FinetuneStage(&ctx, system == "acmix" ? adapt_ckpt : "",
                              subset, tag);
      auto decoded = DecodeStage(&ctx, ft.ckpt, paths.test, with_lm, tag);
      CompareCell cell;
      cell.no_lm = EvaluateStage(&ctx, decoded.greedy_hyps, paths.test, tag);
      if (with_lm) {
        cell.with_lm =
            EvaluateStage(&ctx, decoded.lm_hyps, paths.test, tag + "-lm");
        cell.has_lm = true;
      }
      row.cells[subset] = std::move(cell);
    }
    table.rows.push_back(std::move(row));
  }

  AblationResult result;
  result.run_dir = ctx.dir();
  result.report = Compare(table);
  WriteTextFile(ctx.Path("ablation-report.md"), result.report.markdown);
  WriteTextFile(ctx.Path("ablation-report.csv"), result.report.csv);
  return result;
}

}  // namespace acmix
