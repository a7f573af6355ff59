// src/cli/pipeline.h

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

#ifndef ACMIX_CLI_PIPELINE_H_
#define ACMIX_CLI_PIPELINE_H_

#include <string>
#include <vector>

#include "cli/config.h"
#include "corpus/manifest.h"
#include "eval/report.h"
#include "eval/wer.h"

namespace acmix {

// A run directory holds every artifact of one experiment: the frozen resolved
// config, checkpoints, loss traces, hypotheses, evaluations, reports, and an
// access log recording each manifest read with its purpose (used to audit
// test-set hygiene).
class RunContext {
 public:
  RunContext(const ExperimentConfig& cfg, const std::string& run_dir);

  const ExperimentConfig& cfg() const { return cfg_; }
  const std::string& dir() const { return dir_; }
  std::string Path(const std::string& name) const { return dir_ + "/" + name; }

  void LogAccess(const std::string& purpose, const std::string& path);
  // Number of access-log entries with the given purpose and path.
  int CountAccesses(const std::string& purpose, const std::string& path) const;

 private:
  ExperimentConfig cfg_;
  std::string dir_;
};

// Resolves the run directory: explicit_dir when non-empty, otherwise a
// timestamped directory under $ACMIX_RUN_ROOT or cfg.run_root.
std::string MakeRunDir(const ExperimentConfig& cfg,
                       const std::string& explicit_dir);

struct CorpusPaths {
  std::string source, train, valid, test;
};
CorpusPaths ManifestPaths(const ExperimentConfig& cfg);

// Synthesizes the two-domain corpus (wavs + four manifests + a word n-gram
// LM in ARPA form trained on the target-train transcripts). External corpora
// are left untouched. force regenerates even when manifests already exist.
void GenCorpus(const ExperimentConfig& cfg, bool force = false);
void EnsureCorpus(const ExperimentConfig& cfg);

// Stage entry points; each returns the paths of the artifacts it wrote.
std::string AdaptStage(RunContext* ctx, double alpha, const std::string& tag);

struct FinetuneStageResult {
  std::string ckpt;
  int64_t steps = 0;
};
FinetuneStageResult FinetuneStage(RunContext* ctx,
                                  const std::string& encoder_ckpt,
                                  const std::string& subset,
                                  const std::string& tag,
                                  const std::string& mode_override = "",
                                  int64_t steps_override = 0);

struct DecodeStageResult {
  std::string greedy_hyps;  // no-LM path
  std::string lm_hyps;      // empty when LM decoding disabled
};
// One decode invocation reads the manifest once and emits the no-LM
// hypotheses plus, when with_lm, the LM-fused ones from the same forward
// passes.
DecodeStageResult DecodeStage(RunContext* ctx, const std::string& ckpt,
                              const std::string& manifest_path, bool with_lm,
                              const std::string& tag);

WerReport EvaluateStage(RunContext* ctx, const std::string& hyps_path,
                        const std::string& manifest_path,
                        const std::string& label);

// Per-utterance evaluation CSV round-trip (consumed by the report command).
void WriteEvalCsv(const std::string& path, const WerReport& report);
WerReport ReadEvalCsv(const std::string& path, const std::string& label);

struct PipelineResult {
  std::string run_dir;
  WerReport test_no_lm;
  WerReport test_lm;
  bool has_lm = false;
};
// gen/ingest -> adapt (or skip) -> finetune -> decode (with and without LM)
// -> evaluate -> report, everything under the run directory.
PipelineResult RunPipeline(const ExperimentConfig& cfg,
                           const std::string& explicit_run_dir = "");

struct SweepAlphaResult {
  std::string run_dir;
  std::vector<std::pair<double, double>> valid_wer;  // (alpha, WER) ascending
  double chosen_alpha = 0.0;
  bool tie = false;  // tie broken toward the smaller alpha
  WerReport test_no_lm;
  WerReport test_lm;
  bool has_lm = false;
};
// Adapts + fine-tunes + decodes the validation split per alpha, selects the
// argmin validation WER (ties toward smaller alpha), and touches the test
// split exactly once, with the selected alpha.
SweepAlphaResult SweepAlpha(const ExperimentConfig& cfg,
                            const std::string& explicit_run_dir = "");

struct AblationResult {
  std::string run_dir;
  RenderedReport report;
};
// Nested supervised subsets (10min ⊂ 1h ⊂ 5h ⊂ full) with step budgets
// scaled by the full-scale ratios; emits the 4-group x {test set, +LM} grid
// comparing no-adaptation against the mixup-adapted system.
AblationResult SubsetAblation(const ExperimentConfig& cfg,
                              const std::string& explicit_run_dir = "");

}  // namespace acmix

#endif  // ACMIX_CLI_PIPELINE_H_
