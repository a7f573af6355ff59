// src/cli/config.cc

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

#include "cli/config.h"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "base/errors.h"
#include "base/ndarray-io.h"

namespace acmix {

namespace {

std::string Trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double ParseDouble(const std::string& section, const std::string& key,
                   const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": bad number '" + v + "'");
  }
}

int64_t ParseInt(const std::string& section, const std::string& key,
                 const std::string& v) {
  try {
    size_t pos = 0;
    int64_t i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": bad integer '" + v + "'");
  }
}

bool ParseBool(const std::string& section, const std::string& key,
               const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("[" + section + "] " + key + ": bad bool '" + v + "'");
}

std::vector<double> ParseDoubleList(const std::string& section,
                                    const std::string& key,
                                    const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    out.push_back(ParseDouble(section, key, item));
  }
  return out;
}

std::string FmtD(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig ParseConfigString(const std::string& text) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, const std::string&,
                                    const std::string&)>;
  // (section, key) -> setter(section, key, value)
  std::map<std::string, std::map<std::string, Setter>> schema;

  auto d = [](double* slot) {
    return [slot](const std::string& s, const std::string& k,
                  const std::string& v) { *slot = ParseDouble(s, k, v); };
  };
  auto i64 = [](int64_t* slot) {
    return [slot](const std::string& s, const std::string& k,
                  const std::string& v) { *slot = ParseInt(s, k, v); };
  };
  auto i32 = [](int* slot) {
    return [slot](const std::string& s, const std::string& k,
                  const std::string& v) { *slot = int(ParseInt(s, k, v)); };
  };
  auto u64 = [](uint64_t* slot) {
    return [slot](const std::string& s, const std::string& k,
                  const std::string& v) {
      *slot = uint64_t(ParseInt(s, k, v));
    };
  };
  auto str = [](std::string* slot) {
    return [slot](const std::string&, const std::string&,
                  const std::string& v) { *slot = v; };
  };

  schema["run"]["seed"] = u64(&cfg.seed);
  schema["run"]["run_root"] = str(&cfg.run_root);
  schema["run"]["name"] = str(&cfg.name);

  schema["corpus"]["kind"] = str(&cfg.corpus_kind);
  schema["corpus"]["dir"] = str(&cfg.corpus_dir);
  schema["corpus"]["seed"] = u64(&cfg.synth.seed);
  schema["corpus"]["vocab_size"] = i32(&cfg.synth.vocab_size);
  schema["corpus"]["source_words_min"] = i32(&cfg.source_words_min);
  schema["corpus"]["source_words_max"] = i32(&cfg.source_words_max);
  schema["corpus"]["words_min"] = i32(&cfg.synth.words_min);
  schema["corpus"]["words_max"] = i32(&cfg.synth.words_max);
  schema["corpus"]["speaker_count"] = i32(&cfg.synth.speaker_count);
  schema["corpus"]["accent_warp"] = d(&cfg.synth.accent_warp);
  schema["corpus"]["noise_snr_db"] = d(&cfg.synth.noise_snr_db);
  schema["corpus"]["source_count"] = i32(&cfg.source_count);
  schema["corpus"]["target_train_count"] = i32(&cfg.target_train_count);
  schema["corpus"]["target_valid_count"] = i32(&cfg.target_valid_count);
  schema["corpus"]["target_test_count"] = i32(&cfg.target_test_count);
  schema["corpus"]["source_manifest"] = str(&cfg.source_manifest);
  schema["corpus"]["target_train_manifest"] = str(&cfg.target_train_manifest);
  schema["corpus"]["target_valid_manifest"] = str(&cfg.target_valid_manifest);
  schema["corpus"]["target_test_manifest"] = str(&cfg.target_test_manifest);

  schema["mixup"]["alpha"] = d(&cfg.mixup.alpha);
  schema["mixup"]["strategy"] = [&cfg](const std::string&, const std::string&,
                                       const std::string& v) {
    cfg.mixup.strategy = ParseMixupStrategy(v);
  };
  schema["mixup"]["rms_match"] = [&cfg](const std::string& s,
                                        const std::string& k,
                                        const std::string& v) {
    cfg.mixup.rms_match = ParseBool(s, k, v);
  };

  schema["encoder"]["n_layers"] = i32(&cfg.enc_layers);
  schema["encoder"]["d_model"] = i32(&cfg.enc_d_model);
  schema["encoder"]["n_mels"] = i32(&cfg.enc_n_mels);
  schema["encoder"]["last_n"] = i32(&cfg.last_n);

  schema["spin"]["n_clusters"] = i32(&cfg.spin.n_clusters);
  schema["spin"]["proj_dim"] = i32(&cfg.spin.proj_dim);
  schema["spin"]["temp"] = d(&cfg.spin.temp);
  schema["spin"]["sinkhorn_eps"] = d(&cfg.spin.sinkhorn_eps);
  schema["spin"]["sinkhorn_iters"] = i32(&cfg.spin.sinkhorn_iters);

  schema["train"]["adaptation"] = str(&cfg.adaptation);
  schema["train"]["adapt_steps"] = i64(&cfg.adapt_steps);
  schema["train"]["adapt_warmup"] = i64(&cfg.adapt_warmup);
  schema["train"]["adapt_peak_lr"] = d(&cfg.adapt_peak_lr);
  schema["train"]["adapt_final_lr"] = d(&cfg.adapt_final_lr);
  schema["train"]["adapt_batch"] = i32(&cfg.adapt_batch);
  schema["train"]["ft_mode"] = str(&cfg.ft_mode);
  schema["train"]["ft_steps"] = i64(&cfg.ft_steps);
  schema["train"]["ft_warmup"] = i64(&cfg.ft_warmup);
  schema["train"]["ft_peak_lr"] = d(&cfg.ft_peak_lr);
  schema["train"]["ft_final_lr"] = d(&cfg.ft_final_lr);
  schema["train"]["ft_batch"] = i32(&cfg.ft_batch);
  schema["train"]["head_hidden"] = i32(&cfg.head_hidden);
  schema["train"]["head_layers"] = i32(&cfg.head_layers);
  schema["train"]["clip_norm"] = d(&cfg.clip_norm);
  schema["train"]["min_duration_s"] = d(&cfg.min_duration_s);
  schema["train"]["subset"] = str(&cfg.subset);
  schema["train"]["full_scale_ft_steps"] = i64(&cfg.full_scale_ft_steps);

  schema["decode"]["beam"] = i32(&cfg.beam);
  schema["decode"]["lm_weight"] = d(&cfg.lm_weight);
  schema["decode"]["word_bonus"] = d(&cfg.word_bonus);
  schema["decode"]["arpa"] = str(&cfg.arpa_path);
  schema["decode"]["lm_order"] = i32(&cfg.lm_order);

  schema["sweep"]["alphas"] = [&cfg](const std::string& s,
                                     const std::string& k,
                                     const std::string& v) {
    cfg.sweep_alphas = ParseDoubleList(s, k, v);
  };
  schema["sweep"]["ft_mode"] = str(&cfg.sweep_ft_mode);
  schema["sweep"]["ft_steps"] = i64(&cfg.sweep_ft_steps);

  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = Trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": bad section header '" + line + "'");
      section = line.substr(1, line.size() - 2);
      if (schema.find(section) == schema.end()) {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value, got '" + line + "'");
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside any section");
    auto& keys = schema.at(section);
    auto it = keys.find(key);
    if (it == keys.end()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "' in [" + section + "]");
    }
    it->second(section, key, value);
  }
  ValidateConfig(cfg);
  return cfg;
}

ExperimentConfig ParseConfigFile(const std::string& path) {
  return ParseConfigString(ReadTextFile(path));
}

double SubsetFraction(const std::string& subset) {
  // The full set stands in for ~11 h; 5 h, 1 h and 10 min scale accordingly.
  if (subset == "full") return 1.0;
  if (subset == "5h") return 5.0 / 11.0;
  if (subset == "1h") return 1.0 / 11.0;
  if (subset == "10min") return 1.0 / 66.0;
  throw ConfigError("unknown subset '" + subset +
                    "' (want full|5h|1h|10min)");
}

double SubsetStepRatio(const std::string& subset) {
  // Full-scale budgets 150k : 75k : 15k : 2.5k.
  if (subset == "full") return 1.0;
  if (subset == "5h") return 75.0 / 150.0;
  if (subset == "1h") return 15.0 / 150.0;
  if (subset == "10min") return 2.5 / 150.0;
  throw ConfigError("unknown subset '" + subset +
                    "' (want full|5h|1h|10min)");
}

void ValidateConfig(const ExperimentConfig& cfg) {
  if (cfg.corpus_kind != "synth" && cfg.corpus_kind != "external") {
    throw ConfigError("[corpus] kind must be synth|external");
  }
  if (cfg.corpus_kind == "external") {
    for (const auto* p :
         {&cfg.source_manifest, &cfg.target_train_manifest,
          &cfg.target_valid_manifest, &cfg.target_test_manifest}) {
      if (p->empty())
        throw ConfigError("[corpus] external kind requires all four manifests");
    }
  }
  ValidateMixupConfig(cfg.mixup);
  ValidateSpinConfig(cfg.spin);
  if (cfg.adaptation != "acmix" && cfg.adaptation != "none") {
    throw ConfigError("[train] adaptation must be acmix|none");
  }
  ParseFinetuneMode(cfg.ft_mode);
  SubsetFraction(cfg.subset);
  if (cfg.last_n < 0 || cfg.last_n > cfg.enc_layers) {
    throw ConfigError("[encoder] last_n out of range");
  }
  if (cfg.beam < 1) throw ConfigError("[decode] beam must be >= 1");
  if (cfg.sweep_alphas.empty())
    throw ConfigError("[sweep] alphas must not be empty");
  if (!cfg.sweep_ft_mode.empty()) ParseFinetuneMode(cfg.sweep_ft_mode);
  if ((cfg.source_words_min == 0) != (cfg.source_words_max == 0) ||
      cfg.source_words_min < 0 || cfg.source_words_max < cfg.source_words_min) {
    throw ConfigError("[corpus] bad source_words range");
  }
  for (double a : cfg.sweep_alphas) {
    MixupConfig probe = cfg.mixup;
    probe.alpha = a;
    ValidateMixupConfig(probe);
  }
}

std::string RenderConfig(const ExperimentConfig& cfg) {
  std::string out;
  out += "[corpus]\n";
  out += "accent_warp = " + FmtD(cfg.synth.accent_warp) + "\n";
  out += "dir = " + cfg.corpus_dir + "\n";
  out += "kind = " + cfg.corpus_kind + "\n";
  out += "noise_snr_db = " + FmtD(cfg.synth.noise_snr_db) + "\n";
  out += "seed = " + std::to_string(cfg.synth.seed) + "\n";
  out += "source_count = " + std::to_string(cfg.source_count) + "\n";
  out += "source_words_max = " + std::to_string(cfg.source_words_max) + "\n";
  out += "source_words_min = " + std::to_string(cfg.source_words_min) + "\n";
  out += "source_manifest = " + cfg.source_manifest + "\n";
  out += "speaker_count = " + std::to_string(cfg.synth.speaker_count) + "\n";
  out += "target_test_count = " + std::to_string(cfg.target_test_count) + "\n";
  out += "target_test_manifest = " + cfg.target_test_manifest + "\n";
  out += "target_train_count = " + std::to_string(cfg.target_train_count) + "\n";
  out += "target_train_manifest = " + cfg.target_train_manifest + "\n";
  out += "target_valid_count = " + std::to_string(cfg.target_valid_count) + "\n";
  out += "target_valid_manifest = " + cfg.target_valid_manifest + "\n";
  out += "vocab_size = " + std::to_string(cfg.synth.vocab_size) + "\n";
  out += "words_max = " + std::to_string(cfg.synth.words_max) + "\n";
  out += "words_min = " + std::to_string(cfg.synth.words_min) + "\n";
  out += "\n[decode]\n";
  out += "arpa = " + cfg.arpa_path + "\n";
  out += "beam = " + std::to_string(cfg.beam) + "\n";
  out += "lm_order = " + std::to_string(cfg.lm_order) + "\n";
  out += "lm_weight = " + FmtD(cfg.lm_weight) + "\n";
  out += "word_bonus = " + FmtD(cfg.word_bonus) + "\n";
  out += "\n[encoder]\n";
  out += "d_model = " + std::to_string(cfg.enc_d_model) + "\n";
  out += "last_n = " + std::to_string(cfg.last_n) + "\n";
  out += "n_layers = " + std::to_string(cfg.enc_layers) + "\n";
  out += "n_mels = " + std::to_string(cfg.enc_n_mels) + "\n";
  out += "\n[mixup]\n";
  out += "alpha = " + FmtD(cfg.mixup.alpha) + "\n";
  out += "rms_match = " + std::string(cfg.mixup.rms_match ? "true" : "false") +
         "\n";
  out += "strategy = " + std::string(MixupStrategyName(cfg.mixup.strategy)) +
         "\n";
  out += "\n[run]\n";
  out += "name = " + cfg.name + "\n";
  out += "run_root = " + cfg.run_root + "\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  out += "\n[spin]\n";
  out += "n_clusters = " + std::to_string(cfg.spin.n_clusters) + "\n";
  out += "proj_dim = " + std::to_string(cfg.spin.proj_dim) + "\n";
  out += "sinkhorn_eps = " + FmtD(cfg.spin.sinkhorn_eps) + "\n";
  out += "sinkhorn_iters = " + std::to_string(cfg.spin.sinkhorn_iters) + "\n";
  out += "temp = " + FmtD(cfg.spin.temp) + "\n";
  out += "\n[sweep]\n";
  out += "ft_mode = " + cfg.sweep_ft_mode + "\n";
  out += "ft_steps = " + std::to_string(cfg.sweep_ft_steps) + "\n";
  out += "alphas = ";
  for (size_t i = 0; i < cfg.sweep_alphas.size(); ++i) {
    if (i) out += ",";
    out += FmtD(cfg.sweep_alphas[i]);
  }
  out += "\n";
  out += "\n[train]\n";
  out += "adapt_batch = " + std::to_string(cfg.adapt_batch) + "\n";
  out += "adapt_final_lr = " + FmtD(cfg.adapt_final_lr) + "\n";
  out += "adapt_peak_lr = " + FmtD(cfg.adapt_peak_lr) + "\n";
  out += "adapt_steps = " + std::to_string(cfg.adapt_steps) + "\n";
  out += "adapt_warmup = " + std::to_string(cfg.adapt_warmup) + "\n";
  out += "adaptation = " + cfg.adaptation + "\n";
  out += "clip_norm = " + FmtD(cfg.clip_norm) + "\n";
  out += "ft_batch = " + std::to_string(cfg.ft_batch) + "\n";
  out += "ft_final_lr = " + FmtD(cfg.ft_final_lr) + "\n";
  out += "ft_mode = " + cfg.ft_mode + "\n";
  out += "ft_peak_lr = " + FmtD(cfg.ft_peak_lr) + "\n";
  out += "ft_steps = " + std::to_string(cfg.ft_steps) + "\n";
  out += "ft_warmup = " + std::to_string(cfg.ft_warmup) + "\n";
  out += "full_scale_ft_steps = " + std::to_string(cfg.full_scale_ft_steps) +
         "\n";
  out += "head_hidden = " + std::to_string(cfg.head_hidden) + "\n";
  out += "head_layers = " + std::to_string(cfg.head_layers) + "\n";
  out += "min_duration_s = " + FmtD(cfg.min_duration_s) + "\n";
  out += "subset = " + cfg.subset + "\n";
  return out;
}

}  // namespace acmix
