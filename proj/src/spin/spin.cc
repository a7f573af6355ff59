// src/spin/spin.cc

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

#include "spin/spin.h"

#include <cmath>

#include "base/errors.h"
#include "base/kernels.h"
#include "base/parallel.h"
#include "base/rng.h"

namespace acmix {

void ValidateSpinConfig(const SpinConfig& cfg) {
  if (cfg.n_clusters < 2) throw ConfigError("spin: n_clusters must be >= 2");
  if (cfg.proj_dim < 1) throw ConfigError("spin: proj_dim must be >= 1");
  if (!(cfg.temp > 0.0)) throw ConfigError("spin: temp must be > 0");
  if (!(cfg.sinkhorn_eps > 0.0))
    throw ConfigError("spin: sinkhorn_eps must be > 0");
  if (cfg.sinkhorn_iters < 1)
    throw ConfigError("spin: sinkhorn_iters must be >= 1");
}

SpinState InitSpin(const SpinConfig& cfg, int d_model) {
  ValidateSpinConfig(cfg);
  SpinState s;
  s.cfg = cfg;
  Rng rng(cfg.seed);
  Mat w(d_model, cfg.proj_dim);
  const double std_w = std::sqrt(2.0 / d_model);
  for (auto& v : w.data) v = std_w * rng.Gauss();
  s.params["spin/w"] = std::move(w);
  s.params["spin/b"] = Mat(1, cfg.proj_dim);
  Mat protos(cfg.n_clusters, cfg.proj_dim);
  for (auto& v : protos.data) v = rng.Gauss();
  s.params["spin/prototypes"] = std::move(protos);
  RenormalizePrototypes(&s);
  return s;
}

void RenormalizePrototypes(SpinState* state) {
  Mat& protos = state->params.at("spin/prototypes");
  for (int64_t k = 0; k < protos.rows; ++k) {
    double* row = protos.RowPtr(k);
    double n = 0.0;
    for (int64_t j = 0; j < protos.cols; ++j) n += row[j] * row[j];
    n = std::sqrt(n);
    if (n == 0.0) {
      row[0] = 1.0;  // degenerate prototype resets to e1
      continue;
    }
    const double inv = 1.0 / n;
    for (int64_t j = 0; j < protos.cols; ++j) row[j] *= inv;
  }
}

Mat Project(const SpinState& state, const Mat& embeddings,
            ProjectCache* cache) {
  const Mat& w = state.params.at("spin/w");
  const Mat& b = state.params.at("spin/b");
  if (embeddings.cols != w.rows) {
    throw DataError("project: embedding dim " + std::to_string(embeddings.cols) +
                    " != " + std::to_string(w.rows));
  }
  Mat pre(embeddings.rows, w.cols);
  kernels::MatMulNN(embeddings, w, &pre);
  for (int64_t i = 0; i < pre.rows; ++i) {
    double* r = pre.RowPtr(i);
    const double* br = b.RowPtr(0);
    for (int64_t j = 0; j < pre.cols; ++j) r[j] += br[j];
  }
  Mat z(pre.rows, pre.cols);
  std::vector<double> inv_norm(size_t(pre.rows), 0.0);
  for (int64_t i = 0; i < pre.rows; ++i) {
    const double* r = pre.RowPtr(i);
    double* zr = z.RowPtr(i);
    double n = 0.0;
    for (int64_t j = 0; j < pre.cols; ++j) n += r[j] * r[j];
    n = std::sqrt(n);
    if (n == 0.0) {
      zr[0] = 1.0;  // defined fallback for an exactly-zero row
      continue;
    }
    const double inv = 1.0 / n;
    inv_norm[size_t(i)] = inv;
    for (int64_t j = 0; j < pre.cols; ++j) zr[j] = r[j] * inv;
  }
  if (cache != nullptr) {
    cache->pre = std::move(pre);
    cache->inv_norm = std::move(inv_norm);
  }
  return z;
}

Mat ProjectBackward(const SpinState& state, const Mat& embeddings,
                    const ProjectCache& cache, const Mat& dz, ArrayMap* grads) {
  const Mat& w = state.params.at("spin/w");
  const int64_t n = dz.rows, p = dz.cols;
  Mat dpre(n, p);
  for (int64_t i = 0; i < n; ++i) {
    const double inv = cache.inv_norm[size_t(i)];
    double* dp = dpre.RowPtr(i);
    if (inv == 0.0) continue;  // fallback rows carry no gradient
    const double* pr = cache.pre.RowPtr(i);
    const double* dzr = dz.RowPtr(i);
    double dot = 0.0;  // z . dz, with z = pre * inv
    for (int64_t j = 0; j < p; ++j) dot += pr[j] * inv * dzr[j];
    for (int64_t j = 0; j < p; ++j) {
      dp[j] = (dzr[j] - pr[j] * inv * dot) * inv;
    }
  }
  if (grads != nullptr) {
    Mat& dw = (*grads)["spin/w"];
    if (dw.Empty()) dw.Resize(w.rows, w.cols);
    kernels::MatMulTN(embeddings, dpre, &dw, /*acc=*/true);
    Mat& db = (*grads)["spin/b"];
    if (db.Empty()) db.Resize(1, p);
    double* dbr = db.RowPtr(0);
    for (int64_t i = 0; i < n; ++i) {
      const double* dp = dpre.RowPtr(i);
      for (int64_t j = 0; j < p; ++j) dbr[j] += dp[j];
    }
  }
  Mat de(n, embeddings.cols);
  kernels::MatMulNN(dpre, kernels::Transpose(w), &de);
  return de;
}

Mat Scores(const SpinState& state, const Mat& z) {
  const Mat& protos = state.params.at("spin/prototypes");
  Mat s(z.rows, protos.rows);
  kernels::MatMulNT(z, protos, &s);
  const double inv_temp = 1.0 / state.cfg.temp;
  for (auto& v : s.data) v *= inv_temp;
  return s;
}

Mat ScoresBackward(const SpinState& state, const Mat& z, const Mat& ds,
                   ArrayMap* grads) {
  const Mat& protos = state.params.at("spin/prototypes");
  Mat ds_scaled = ds;
  const double inv_temp = 1.0 / state.cfg.temp;
  for (auto& v : ds_scaled.data) v *= inv_temp;
  if (grads != nullptr) {
    Mat& dproto = (*grads)["spin/prototypes"];
    if (dproto.Empty()) dproto.Resize(protos.rows, protos.cols);
    kernels::MatMulTN(ds_scaled, z, &dproto, /*acc=*/true);
  }
  Mat dz(z.rows, z.cols);
  kernels::MatMulNN(ds_scaled, protos, &dz);
  return dz;
}

Mat AssignCodes(const Mat& scores, const SpinConfig& cfg) {
  if (!scores.AllFinite())
    throw NumericalError("assign_codes: scores contain NaN/Inf");
  const int64_t n = scores.rows, k = scores.cols;
  Mat logq(n, k);
  const double inv_eps = 1.0 / cfg.sinkhorn_eps;
  for (size_t i = 0; i < logq.data.size(); ++i) {
    logq.data[i] = scores.data[i] * inv_eps;
  }
  const double log_col_target = std::log(double(n) / double(k));

  auto col_pass = [&]() {
    ParallelFor(k, [&](int64_t j) {
      double mx = -1e300;
      for (int64_t i = 0; i < n; ++i) mx = std::max(mx, logq(i, j));
      double s = 0.0;
      for (int64_t i = 0; i < n; ++i) s += std::exp(logq(i, j) - mx);
      const double shift = log_col_target - (mx + std::log(s));
      for (int64_t i = 0; i < n; ++i) logq(i, j) += shift;
    });
  };
  auto row_pass = [&]() {
    ParallelFor(n, [&](int64_t i) {
      double* r = logq.RowPtr(i);
      const double lse = kernels::LogSumExp(r, k);
      for (int64_t j = 0; j < k; ++j) r[j] -= lse;
    });
  };

  for (int it = 0; it < cfg.sinkhorn_iters; ++it) {
    col_pass();
    row_pass();
  }
  row_pass();  // final row normalization (codes are per-frame distributions)

  Mat q(n, k);
  for (size_t i = 0; i < q.data.size(); ++i) q.data[i] = std::exp(logq.data[i]);
  return q;
}

double CodeColumnResidual(const Mat& q) {
  const int64_t n = q.rows, k = q.cols;
  const double target = double(n) / double(k);
  double worst = 0.0;
  for (int64_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (int64_t i = 0; i < n; ++i) s += q(i, j);
    worst = std::max(worst, std::abs(s - target) / target);
  }
  return worst;
}

SwappedLossResult SwappedLoss(const Mat& s1, const Mat& s2, const Mat& q1,
                              const Mat& q2) {
  if (!s1.SameShape(s2) || !s1.SameShape(q1) || !s1.SameShape(q2)) {
    throw DataError("swapped_loss: shape mismatch");
  }
  const int64_t n = s1.rows, k = s1.cols;
  for (const Mat* q : {&q1, &q2}) {
    for (int64_t i = 0; i < n; ++i) {
      double s = 0.0;
      const double* r = q->RowPtr(i);
      for (int64_t j = 0; j < k; ++j) s += r[j];
      if (std::abs(s - 1.0) > 1e-6) {
        throw NumericalError("swapped_loss: code row " + std::to_string(i) +
                             " sums to " + std::to_string(s));
      }
    }
  }
  Mat logp1 = s1, logp2 = s2;
  kernels::RowLogSoftmax(&logp1);
  kernels::RowLogSoftmax(&logp2);

  double loss = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double* lp1 = logp1.RowPtr(i);
    const double* lp2 = logp2.RowPtr(i);
    const double* q1r = q1.RowPtr(i);
    const double* q2r = q2.RowPtr(i);
    double ce1 = 0.0, ce2 = 0.0;
    for (int64_t j = 0; j < k; ++j) {
      ce1 -= q2r[j] * lp1[j];
      ce2 -= q1r[j] * lp2[j];
    }
    loss += ce1 + ce2;
  }
  const double inv_2n = 1.0 / (2.0 * double(n));
  loss *= inv_2n;

  SwappedLossResult res;
  res.loss = loss;
  res.ds1.Resize(n, k);
  res.ds2.Resize(n, k);
  for (int64_t i = 0; i < n; ++i) {
    const double* lp1 = logp1.RowPtr(i);
    const double* lp2 = logp2.RowPtr(i);
    const double* q1r = q1.RowPtr(i);
    const double* q2r = q2.RowPtr(i);
    double* d1 = res.ds1.RowPtr(i);
    double* d2 = res.ds2.RowPtr(i);
    for (int64_t j = 0; j < k; ++j) {
      d1[j] = (std::exp(lp1[j]) - q2r[j]) * inv_2n;
      d2[j] = (std::exp(lp2[j]) - q1r[j]) * inv_2n;
    }
  }
  return res;
}

}  // namespace acmix
