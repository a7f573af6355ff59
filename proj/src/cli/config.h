// src/cli/config.h

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

#ifndef ACMIX_CLI_CONFIG_H_
#define ACMIX_CLI_CONFIG_H_

#include <string>
#include <vector>

#include "corpus/synth.h"
#include "mixup/mixup.h"
#include "spin/spin.h"
#include "train/finetune.h"

namespace acmix {

// Experiment configuration parsed from a sectioned key=value text file.
// Unknown sections or keys are ConfigErrors (fail-closed).
struct ExperimentConfig {
  // [run]
  uint64_t seed = 42;
  std::string run_root = "runs";  // overridable via ACMIX_RUN_ROOT
  std::string name = "run";

  // [corpus]
  std::string corpus_kind = "synth";  // synth | external
  std::string corpus_dir = "corpus";
  SynthSpec synth;
  // Source-domain utterance length range; 0 = same as words_min/words_max.
  int source_words_min = 0;
  int source_words_max = 0;
  int source_count = 2000;
  int target_train_count = 600;
  int target_valid_count = 100;
  int target_test_count = 300;
  std::string source_manifest;        // external kind
  std::string target_train_manifest;
  std::string target_valid_manifest;
  std::string target_test_manifest;

  // [mixup]
  MixupConfig mixup;

  // [encoder]
  int enc_layers = 4;
  int enc_d_model = 128;
  int enc_n_mels = 40;
  int last_n = 2;

  // [spin]
  SpinConfig spin;

  // [train]
  std::string adaptation = "acmix";  // acmix | none
  int64_t adapt_steps = 2000;
  int64_t adapt_warmup = 200;
  double adapt_peak_lr = 1e-4;
  double adapt_final_lr = 1e-6;
  int adapt_batch = 8;
  std::string ft_mode = "full_ft";
  int64_t ft_steps = 5000;
  int64_t ft_warmup = 500;
  double ft_peak_lr = 8e-5;
  double ft_final_lr = 8e-7;
  int ft_batch = 8;
  int head_hidden = 32;
  int head_layers = 2;
  double clip_norm = 5.0;
  double min_duration_s = 2.5;
  std::string subset = "full";  // full | 5h | 1h | 10min
  // Documented full-scale budgets (the desk budgets above are the scaled-down
  // operating points; the subset ratios 150:75:15:2.5 derive from these).
  int64_t full_scale_ft_steps = 150000;

  // [decode]
  int beam = 16;
  double lm_weight = 1.0;
  double word_bonus = 0.0;
  std::string arpa_path;  // empty = corpus_dir/lm.arpa
  int lm_order = 4;

  // [sweep]
  std::vector<double> sweep_alphas{0.1, 0.3, 0.5};
  // Selection runs may use a cheaper fine-tune than the final system; empty /
  // zero inherit [train] ft_mode / ft_steps.
  std::string sweep_ft_mode;
  int64_t sweep_ft_steps = 0;
};

ExperimentConfig ParseConfigFile(const std::string& path);
ExperimentConfig ParseConfigString(const std::string& text);

// Deterministic round-trippable rendering (sorted sections and keys), frozen
// into every run directory.
std::string RenderConfig(const ExperimentConfig& cfg);

void ValidateConfig(const ExperimentConfig& cfg);

// Subset analogue handling: fraction of the full supervised set and the
// matching step-budget ratio (150k : 75k : 15k : 2.5k).
double SubsetFraction(const std::string& subset);
double SubsetStepRatio(const std::string& subset);

}  // namespace acmix

#endif  // ACMIX_CLI_CONFIG_H_
