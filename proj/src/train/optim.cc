// src/train/optim.cc

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

#include "train/optim.h"

#include <cmath>
#include <iostream>

#include "base/errors.h"

namespace acmix {

void ValidateSchedule(const Schedule& s) {
  if (!(s.warmup_steps > 0 && s.warmup_steps < s.total_steps)) {
    throw ConfigError("schedule: need 0 < warmup_steps < total_steps, got " +
                      std::to_string(s.warmup_steps) + " / " +
                      std::to_string(s.total_steps));
  }
  if (s.final_lr > s.peak_lr)
    throw ConfigError("schedule: final_lr must be <= peak_lr");
  if (!(s.peak_lr > 0.0)) throw ConfigError("schedule: peak_lr must be > 0");
}

double LrAt(const Schedule& s, int64_t step, bool* warned) {
  if (warned != nullptr) *warned = false;
  if (step < 0) {
    if (warned != nullptr) *warned = true;
    step = 0;
  } else if (step > s.total_steps) {
    if (warned != nullptr) *warned = true;
    step = s.total_steps;
  }
  if (step == 0) return 0.0;
  if (step == s.warmup_steps) return s.peak_lr;
  if (step == s.total_steps) return s.final_lr;
  if (step < s.warmup_steps) {
    return s.peak_lr * (double(step) / double(s.warmup_steps));
  }
  const double frac = double(step - s.warmup_steps) /
                      double(s.total_steps - s.warmup_steps);
  return s.peak_lr + (s.final_lr - s.peak_lr) * frac;
}

bool AdamOptimizer::Step(ArrayMap* params, const ArrayMap& grads, double lr) {
  std::map<std::string, Mat*> ptrs;
  for (auto& [name, m] : *params) ptrs[name] = &m;
  return Step(ptrs, grads, lr);
}

bool AdamOptimizer::Step(const std::map<std::string, Mat*>& params,
                         const ArrayMap& grads, double lr) {
  for (const auto& [name, g] : grads) {
    if (!g.AllFinite()) {
      std::cerr << "[acmix] adam: non-finite gradient in '" << name
                << "', step skipped\n";
      return false;
    }
    auto it = params.find(name);
    if (it == params.end()) {
      throw ConfigError("adam: gradient for unknown parameter '" + name + "'");
    }
    if (!it->second->SameShape(g)) {
      throw ConfigError("adam: shape mismatch for '" + name + "'");
    }
  }

  double clip_scale = 1.0;
  if (cfg_.clip_norm > 0.0) {
    double sq = 0.0;
    for (const auto& [name, g] : grads) {
      for (double v : g.data) sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (norm > cfg_.clip_norm) clip_scale = cfg_.clip_norm / norm;
  }

  ++step_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, double(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, double(step_));
  for (const auto& [name, g] : grads) {
    Mat& p = *params.at(name);
    Mat& m = m_[name];
    Mat& v = v_[name];
    if (m.Empty()) m.Resize(g.rows, g.cols);
    if (v.Empty()) v.Resize(g.rows, g.cols);
    for (size_t i = 0; i < p.data.size(); ++i) {
      const double gi = g.data[i] * clip_scale;
      m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * gi;
      v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * gi * gi;
      const double mh = m.data[i] / bc1;
      const double vh = v.data[i] / bc2;
      p.data[i] -= lr * mh / (std::sqrt(vh) + cfg_.eps);
    }
  }
  return true;
}

ArrayMap AdamOptimizer::ExportState() const {
  ArrayMap out;
  for (const auto& [name, m] : m_) out["optim/m/" + name] = m;
  for (const auto& [name, v] : v_) out["optim/v/" + name] = v;
  return out;
}

void AdamOptimizer::ImportState(const ArrayMap& state, int64_t step) {
  step_ = step;
  m_.clear();
  v_.clear();
  for (const auto& [name, arr] : state) {
    if (name.rfind("optim/m/", 0) == 0) m_[name.substr(8)] = arr;
    if (name.rfind("optim/v/", 0) == 0) v_[name.substr(8)] = arr;
  }
}

}  // namespace acmix
