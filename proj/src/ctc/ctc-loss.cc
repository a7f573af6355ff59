// src/ctc/ctc-loss.cc

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

#include "ctc/ctc-loss.h"

#include <cmath>
#include <limits>

#include "base/errors.h"
#include "base/kernels.h"

namespace acmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

void Validate(const Mat& logp, const std::vector<int>& labels) {
  for (int64_t t = 0; t < logp.rows; ++t) {
    double s = 0.0;
    const double* r = logp.RowPtr(t);
    for (int64_t c = 0; c < logp.cols; ++c) s += std::exp(r[c]);
    if (std::abs(s - 1.0) > 1e-6) {
      throw DataError("ctc_loss: exp(log_probs) row " + std::to_string(t) +
                      " sums to " + std::to_string(s));
    }
  }
  for (int l : labels) {
    if (l <= 0 || l >= logp.cols) {
      throw DataError("ctc_loss: label " + std::to_string(l) +
                      " out of range (blank is reserved)");
    }
  }
}

}  // namespace

CtcLossResult CtcLoss(const Mat& log_probs, const std::vector<int>& labels) {
  Validate(log_probs, labels);
  const int64_t T = log_probs.rows;
  const int64_t L = int64_t(labels.size());
  const int64_t S = 2 * L + 1;

  CtcLossResult res;
  res.grad_logp.Resize(T, log_probs.cols);

  // Minimum path length: every label plus a blank between adjacent repeats.
  int64_t min_t = L;
  for (int64_t i = 1; i < L; ++i) {
    if (labels[size_t(i)] == labels[size_t(i - 1)]) ++min_t;
  }
  if (T < min_t) {
    res.loss = std::numeric_limits<double>::infinity();
    res.feasible = false;
    return res;
  }

  auto ext = [&](int64_t s) -> int {
    return (s % 2 == 0) ? 0 : labels[size_t(s / 2)];
  };
  auto can_skip = [&](int64_t s) {
    // Transition s-2 -> s allowed when s is a label differing from the label
    // two positions back.
    return s % 2 == 1 && s >= 2 && ext(s) != ext(s - 2);
  };

  // Forward: alpha[t][s] includes the emission at t.
  Mat alpha(T, S);
  std::fill(alpha.data.begin(), alpha.data.end(), kNegInf);
  alpha(0, 0) = log_probs(0, 0);
  if (S > 1) alpha(0, 1) = log_probs(0, ext(1));
  for (int64_t t = 1; t < T; ++t) {
    for (int64_t s = 0; s < S; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = LogAdd(a, alpha(t - 1, s - 1));
      if (can_skip(s)) a = LogAdd(a, alpha(t - 1, s - 2));
      alpha(t, s) = a == kNegInf ? kNegInf : a + log_probs(t, ext(s));
    }
  }
  double log_p = alpha(T - 1, S - 1);
  if (S > 1) log_p = LogAdd(log_p, alpha(T - 1, S - 2));
  if (log_p == kNegInf) {
    // Unreachable for feasible shapes with finite log-probs, but stay safe.
    res.loss = std::numeric_limits<double>::infinity();
    res.feasible = false;
    return res;
  }
  res.loss = -log_p;

  // Backward: beta[t][s] excludes the emission at t, so that
  // P = sum_s exp(alpha[t][s] + beta[t][s]) at every t.
  Mat beta(T, S);
  std::fill(beta.data.begin(), beta.data.end(), kNegInf);
  beta(T - 1, S - 1) = 0.0;
  if (S > 1) beta(T - 1, S - 2) = 0.0;
  for (int64_t t = T - 2; t >= 0; --t) {
    for (int64_t s = 0; s < S; ++s) {
      double b = kNegInf;
      if (beta(t + 1, s) != kNegInf) {
        b = LogAdd(b, beta(t + 1, s) + log_probs(t + 1, ext(s)));
      }
      if (s + 1 < S && beta(t + 1, s + 1) != kNegInf) {
        b = LogAdd(b, beta(t + 1, s + 1) + log_probs(t + 1, ext(s + 1)));
      }
      if (s + 2 < S && can_skip(s + 2) && beta(t + 1, s + 2) != kNegInf) {
        b = LogAdd(b, beta(t + 1, s + 2) + log_probs(t + 1, ext(s + 2)));
      }
      beta(t, s) = b;
    }
  }

  // grad wrt log_probs[t][c] = -sum_{s: ext(s)=c} exp(alpha + beta - logP).
  for (int64_t t = 0; t < T; ++t) {
    double* g = res.grad_logp.RowPtr(t);
    for (int64_t s = 0; s < S; ++s) {
      const double ab = alpha(t, s) + beta(t, s);
      if (ab == kNegInf) continue;
      g[ext(s)] -= std::exp(ab - log_p);
    }
  }
  return res;
}

std::vector<int> GreedyDecode(const Mat& log_probs) {
  std::vector<int> out;
  int prev = 0;
  for (int64_t t = 0; t < log_probs.rows; ++t) {
    const double* r = log_probs.RowPtr(t);
    int best = 0;
    for (int64_t c = 1; c < log_probs.cols; ++c) {
      if (r[c] > r[best]) best = int(c);
    }
    if (best != 0 && best != prev) out.push_back(best);
    prev = best;
  }
  return out;
}

}  // namespace acmix
