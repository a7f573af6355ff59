// tools/acmix-main.cc

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

#include <iostream>

#include <CLI11.hpp>

#include "base/errors.h"
#include "base/ndarray-io.h"
#include "base/parallel.h"
#include "cli/config.h"
#include "cli/pipeline.h"
#include "eval/report.h"

namespace acmix {
namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.
int Run(int argc, char** argv) {
  CLI::App app{
      "acmix: contrastive-mixup domain adaptation for a small CTC "
      "recognizer"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  app.add_option("--config", config_path, "experiment config file")
      ->required();
  app.add_option("--threads", threads, "OpenMP thread cap (0 = default)");

  std::string run_dir;
  double alpha = -1.0;
  std::string encoder_ckpt, ckpt, manifest, hyps, label = "system";
  std::string subset_flag;
  bool lm_flag = false;
  bool force = false;

  auto* gen = app.add_subcommand("gen-corpus",
                                 "synthesize the two-domain corpus + LM");
  gen->add_flag("--force", force, "regenerate even if manifests exist");

  auto* adapt = app.add_subcommand("adapt", "step-1 SSL adaptation");
  adapt->add_option("--run-dir", run_dir);
  adapt->add_option("--alpha", alpha, "override [mixup] alpha");

  auto* finetune =
      app.add_subcommand("finetune", "step-2 supervised CTC fine-tuning");
  finetune->add_option("--run-dir", run_dir);
  finetune->add_option("--encoder-ckpt", encoder_ckpt,
                       "adapted encoder checkpoint (empty = fresh init)");
  finetune->add_option("--subset", subset_flag, "full|5h|1h|10min override");

  auto* decode = app.add_subcommand("decode", "greedy (+LM) decoding");
  decode->add_option("--run-dir", run_dir);
  decode->add_option("--ckpt", ckpt, "fine-tuned checkpoint")->required();
  decode->add_option("--manifest", manifest)->required();
  decode->add_flag("--lm", lm_flag, "also emit LM-fused hypotheses");

  auto* evaluate = app.add_subcommand("evaluate", "WER against a manifest");
  evaluate->add_option("--run-dir", run_dir);
  evaluate->add_option("--hyps", hyps)->required();
  evaluate->add_option("--manifest", manifest)->required();
  evaluate->add_option("--label", label);

  auto* sweep = app.add_subcommand("sweep-alpha",
                                   "select alpha on the validation split");
  sweep->add_option("--run-dir", run_dir);

  auto* ablate = app.add_subcommand(
      "ablate", "supervised-subset ablation grid (full/5h/1h/10min)");
  ablate->add_option("--run-dir", run_dir);

  std::vector<std::string> report_rows;
  std::vector<std::string> report_baselines;
  std::string report_group = "test";
  std::string report_out = "report";
  auto* report = app.add_subcommand(
      "report", "comparison table from evaluation CSVs");
  report->add_option("--row", report_rows,
                     "name=nolm.csv[,lm.csv] (repeatable)")
      ->required();
  report->add_option("--baseline", report_baselines, "baseline row name(s)");
  report->add_option("--group", report_group, "column-group label");
  report->add_option("--out", report_out, "output prefix");

  auto* run = app.add_subcommand("run", "full pipeline on one config");
  run->add_option("--run-dir", run_dir);

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) SetThreads(threads);

  ExperimentConfig cfg = ParseConfigFile(config_path);

  if (gen->parsed()) {
    GenCorpus(cfg, force);
    std::cout << "corpus at " << cfg.corpus_dir << "\n";
    return 0;
  }
  if (adapt->parsed()) {
    RunContext ctx(cfg, MakeRunDir(cfg, run_dir));
    double a = alpha >= 0.0 ? alpha : cfg.mixup.alpha;
    char tag[16];
    std::snprintf(tag, sizeof(tag), "a%.1f", a);
    std::string path = AdaptStage(&ctx, a, tag);
    std::cout << "adapted checkpoint: " << path << "\n";
    return 0;
  }
  if (finetune->parsed()) {
    RunContext ctx(cfg, MakeRunDir(cfg, run_dir));
    auto res = FinetuneStage(&ctx, encoder_ckpt,
                             subset_flag.empty() ? cfg.subset : subset_flag,
                             "main");
    std::cout << "fine-tuned checkpoint: " << res.ckpt << " (" << res.steps
              << " steps)\n";
    return 0;
  }
  if (decode->parsed()) {
    RunContext ctx(cfg, MakeRunDir(cfg, run_dir));
    auto res = DecodeStage(&ctx, ckpt, manifest, lm_flag, "cli");
    std::cout << "hypotheses: " << res.greedy_hyps;
    if (lm_flag) std::cout << " and " << res.lm_hyps;
    std::cout << "\n";
    return 0;
  }
  if (evaluate->parsed()) {
    RunContext ctx(cfg, MakeRunDir(cfg, run_dir));
    WerReport rep = EvaluateStage(&ctx, hyps, manifest, label);
    std::cout << label << " WER: " << FormatWerPercent(rep.Wer()) << "% over "
              << rep.utts.size() << " utterances\n";
    return 0;
  }
  if (sweep->parsed()) {
    auto res = SweepAlpha(cfg, run_dir);
    std::cout << "chosen alpha: " << res.chosen_alpha
              << (res.tie ? " (tie)" : "") << "\n"
              << "test WER: " << FormatWerPercent(res.test_no_lm.Wer()) << "%";
    if (res.has_lm)
      std::cout << " / +LM " << FormatWerPercent(res.test_lm.Wer()) << "%";
    std::cout << "\nartifacts: " << res.run_dir << "\n";
    return 0;
  }
  if (ablate->parsed()) {
    auto res = SubsetAblation(cfg, run_dir);
    std::cout << res.report.markdown << "artifacts: " << res.run_dir << "\n";
    return 0;
  }
  if (report->parsed()) {
    CompareTable table;
    table.groups = {report_group};
    for (const auto& spec : report_rows) {
      size_t eq = spec.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--row wants name=nolm.csv[,lm.csv]: " + spec);
      CompareRow row;
      row.system = spec.substr(0, eq);
      std::string files = spec.substr(eq + 1);
      size_t comma = files.find(',');
      CompareCell cell;
      cell.no_lm =
          ReadEvalCsv(files.substr(0, comma), row.system);
      if (comma != std::string::npos) {
        cell.with_lm = ReadEvalCsv(files.substr(comma + 1), row.system);
        cell.has_lm = true;
      }
      row.cells[report_group] = std::move(cell);
      table.rows.push_back(std::move(row));
    }
    table.baselines = report_baselines;
    RenderedReport rendered = Compare(table);
    WriteTextFile(report_out + ".md", rendered.markdown);
    WriteTextFile(report_out + ".csv", rendered.csv);
    std::cout << rendered.markdown;
    return 0;
  }
  if (run->parsed()) {
    auto res = RunPipeline(cfg, run_dir);
    std::cout << "test WER: " << FormatWerPercent(res.test_no_lm.Wer()) << "%";
    if (res.has_lm)
      std::cout << " / +LM " << FormatWerPercent(res.test_lm.Wer()) << "%";
    std::cout << "\nartifacts: " << res.run_dir << "\n";
    return 0;
  }
  return 0;
}

}  // namespace
}  // namespace acmix

int main(int argc, char** argv) {
  try {
    return acmix::Run(argc, argv);
  } catch (const acmix::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const acmix::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const acmix::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
