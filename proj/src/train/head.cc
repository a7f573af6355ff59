// src/train/head.cc

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

#include "train/head.h"

#include <cmath>

#include "base/errors.h"
#include "base/kernels.h"
#include "base/rng.h"

namespace acmix {

namespace {

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string PKey(int layer, int dir, const char* name) {
  return "head/l" + std::to_string(layer) + "/" + (dir == 0 ? "fw" : "bw") +
         "/" + name;
}

Mat Randn(int64_t r, int64_t c, double stddev, Rng* rng) {
  Mat m(r, c);
  for (auto& v : m.data) v = stddev * rng->Gauss();
  return m;
}

Mat& GradSlot(ArrayMap* grads, const std::string& key, int64_t r, int64_t c) {
  auto it = grads->find(key);
  if (it == grads->end()) it = grads->emplace(key, Mat(r, c)).first;
  return it->second;
}

}  // namespace

HeadState InitHead(const HeadConfig& cfg) {
  if (cfg.num_layers < 1) throw ConfigError("head: num_layers must be >= 1");
  if (cfg.hidden < 1) throw ConfigError("head: hidden must be >= 1");
  HeadState s;
  s.cfg = cfg;
  Rng rng(cfg.seed);
  const int h = cfg.hidden;
  for (int l = 0; l < cfg.num_layers; ++l) {
    const int in = l == 0 ? cfg.in_dim : 2 * h;
    for (int dir = 0; dir < 2; ++dir) {
      s.params[PKey(l, dir, "wx")] = Randn(in, 4 * h, std::sqrt(2.0 / in), &rng);
      s.params[PKey(l, dir, "wh")] = Randn(h, 4 * h, std::sqrt(2.0 / h), &rng);
      s.params[PKey(l, dir, "b")] = Mat(1, 4 * h);
    }
  }
  s.params["head/out/w"] =
      Randn(2 * h, cfg.n_out, std::sqrt(2.0 / (2 * h)), &rng);
  s.params["head/out/b"] = Mat(1, cfg.n_out);
  return s;
}

Mat HeadForward(const HeadState& state, const Mat& embeddings,
                HeadCache* cache) {
  const int h = state.cfg.hidden;
  const int64_t T = embeddings.rows;
  if (embeddings.cols != state.cfg.in_dim) {
    throw DataError("head: input dim " + std::to_string(embeddings.cols) +
                    " != " + std::to_string(state.cfg.in_dim));
  }
  HeadCache local;
  HeadCache& c = cache != nullptr ? *cache : local;
  c.inputs.assign(size_t(state.cfg.num_layers), Mat());
  c.dirs.assign(size_t(state.cfg.num_layers), {});

  Mat x = embeddings;
  for (int l = 0; l < state.cfg.num_layers; ++l) {
    c.inputs[size_t(l)] = x;
    Mat concat(T, 2 * h);
    for (int dir = 0; dir < 2; ++dir) {
      const Mat& wx = state.params.at(PKey(l, dir, "wx"));
      const Mat& wh = state.params.at(PKey(l, dir, "wh"));
      const Mat& b = state.params.at(PKey(l, dir, "b"));
      LstmDirCache& dc = c.dirs[size_t(l)][size_t(dir)];
      dc.gates.Resize(T, 4 * h);
      dc.c.Resize(T, h);
      dc.tanh_c.Resize(T, h);
      dc.h.Resize(T, h);

      Mat xw(T, 4 * h);
      kernels::MatMulNN(x, wx, &xw);

      for (int64_t k = 0; k < T; ++k) {
        const int64_t t = dir == 0 ? k : T - 1 - k;
        const int64_t tp = dir == 0 ? t - 1 : t + 1;  // previous in time order
        double* g = dc.gates.RowPtr(t);
        const double* xwr = xw.RowPtr(t);
        const double* br = b.RowPtr(0);
        for (int j = 0; j < 4 * h; ++j) g[j] = xwr[j] + br[j];
        if (k > 0) {
          const double* hp = dc.h.RowPtr(tp);
          for (int r = 0; r < h; ++r) {
            const double hv = hp[r];
            const double* whr = wh.RowPtr(r);
            for (int j = 0; j < 4 * h; ++j) g[j] += hv * whr[j];
          }
        }
        double* cr = dc.c.RowPtr(t);
        double* tr = dc.tanh_c.RowPtr(t);
        double* hr = dc.h.RowPtr(t);
        const double* cp = k > 0 ? dc.c.RowPtr(tp) : nullptr;
        for (int r = 0; r < h; ++r) {
          const double gi = Sigmoid(g[r]);
          const double gf = Sigmoid(g[h + r]);
          const double gg = std::tanh(g[2 * h + r]);
          const double go = Sigmoid(g[3 * h + r]);
          g[r] = gi;
          g[h + r] = gf;
          g[2 * h + r] = gg;
          g[3 * h + r] = go;
          cr[r] = gf * (cp != nullptr ? cp[r] : 0.0) + gi * gg;
          tr[r] = std::tanh(cr[r]);
          hr[r] = go * tr[r];
        }
      }
      for (int64_t t = 0; t < T; ++t) {
        const double* hr = dc.h.RowPtr(t);
        double* out = concat.RowPtr(t) + dir * h;
        for (int r = 0; r < h; ++r) out[r] = hr[r];
      }
    }
    x = std::move(concat);
  }
  c.concat = x;

  const Mat& ow = state.params.at("head/out/w");
  const Mat& ob = state.params.at("head/out/b");
  Mat logits(T, state.cfg.n_out);
  kernels::MatMulNN(c.concat, ow, &logits);
  for (int64_t t = 0; t < T; ++t) {
    double* r = logits.RowPtr(t);
    const double* br = ob.RowPtr(0);
    for (int j = 0; j < state.cfg.n_out; ++j) r[j] += br[j];
  }
  return logits;
}

void HeadBackward(const HeadState& state, const HeadCache& cache,
                  const Mat& d_logits, ArrayMap* grads, Mat* d_embeddings) {
  const int h = state.cfg.hidden;
  const int64_t T = d_logits.rows;
  const Mat& ow = state.params.at("head/out/w");

  // Output linear layer.
  {
    Mat& dw = GradSlot(grads, "head/out/w", ow.rows, ow.cols);
    kernels::MatMulTN(cache.concat, d_logits, &dw, /*acc=*/true);
    Mat& db = GradSlot(grads, "head/out/b", 1, state.cfg.n_out);
    double* dbr = db.RowPtr(0);
    for (int64_t t = 0; t < T; ++t) {
      const double* dr = d_logits.RowPtr(t);
      for (int j = 0; j < state.cfg.n_out; ++j) dbr[j] += dr[j];
    }
  }
  Mat dx(T, 2 * h);
  kernels::MatMulNN(d_logits, kernels::Transpose(ow), &dx);

  for (int l = state.cfg.num_layers - 1; l >= 0; --l) {
    const Mat& input = cache.inputs[size_t(l)];
    const int in = int(input.cols);
    Mat dinput(T, in);
    for (int dir = 0; dir < 2; ++dir) {
      const Mat& wx = state.params.at(PKey(l, dir, "wx"));
      const Mat& wh = state.params.at(PKey(l, dir, "wh"));
      const Mat wx_t = kernels::Transpose(wx);
      const Mat wh_t = kernels::Transpose(wh);
      const LstmDirCache& dc = cache.dirs[size_t(l)][size_t(dir)];

      Mat dpre(T, 4 * h);  // gradients at the pre-activation gates
      std::vector<double> dh(static_cast<size_t>(h)), dc_carry(static_cast<size_t>(h));
      std::fill(dh.begin(), dh.end(), 0.0);
      std::fill(dc_carry.begin(), dc_carry.end(), 0.0);

      for (int64_t k = T - 1; k >= 0; --k) {
        const int64_t t = dir == 0 ? k : T - 1 - k;
        const int64_t tp = dir == 0 ? t - 1 : t + 1;
        // dh from the concat output plus the recurrent carry.
        const double* dxr = dx.RowPtr(t) + dir * h;
        const double* g = dc.gates.RowPtr(t);
        const double* tr = dc.tanh_c.RowPtr(t);
        const double* cp = k > 0 ? dc.c.RowPtr(tp) : nullptr;
        double* dp = dpre.RowPtr(t);
        for (int r = 0; r < h; ++r) {
          const double gi = g[r], gf = g[h + r], gg = g[2 * h + r],
                       go = g[3 * h + r];
          const double dht = dxr[r] + dh[size_t(r)];
          double dct = dc_carry[size_t(r)] + dht * go * (1.0 - tr[r] * tr[r]);
          const double d_o = dht * tr[r];
          const double d_i = dct * gg;
          const double d_g = dct * gi;
          const double d_f = dct * (cp != nullptr ? cp[r] : 0.0);
          dc_carry[size_t(r)] = dct * gf;
          dp[r] = d_i * gi * (1.0 - gi);
          dp[h + r] = d_f * gf * (1.0 - gf);
          dp[2 * h + r] = d_g * (1.0 - gg * gg);
          dp[3 * h + r] = d_o * go * (1.0 - go);
        }
        // dh for the previous step in time order: dpre_t * wh^T.
        if (k > 0) {
          std::fill(dh.begin(), dh.end(), 0.0);
          for (int j = 0; j < 4 * h; ++j) {
            const double dv = dp[j];
            const double* wtj = wh_t.RowPtr(j);
            for (int r = 0; r < h; ++r) dh[size_t(r)] += dv * wtj[r];
          }
        }
      }

      Mat& dwx = GradSlot(grads, PKey(l, dir, "wx"), wx.rows, wx.cols);
      kernels::MatMulTN(input, dpre, &dwx, /*acc=*/true);
      // dwh: sum over steps with a predecessor of h_prev^T dpre_t.
      Mat hprev(T, h), dnext(T, h * 4);
      hprev.SetZero();
      dnext.SetZero();
      int64_t used = 0;
      for (int64_t k = 1; k < T; ++k) {
        const int64_t t = dir == 0 ? k : T - 1 - k;
        const int64_t tp = dir == 0 ? t - 1 : t + 1;
        std::copy(dc.h.RowPtr(tp), dc.h.RowPtr(tp) + h, hprev.RowPtr(used));
        std::copy(dpre.RowPtr(t), dpre.RowPtr(t) + 4 * h, dnext.RowPtr(used));
        ++used;
      }
      if (used > 0) {
        Mat hp(used, h), dn(used, 4 * h);
        std::copy(hprev.data.begin(), hprev.data.begin() + used * h,
                  hp.data.begin());
        std::copy(dnext.data.begin(), dnext.data.begin() + used * 4 * h,
                  dn.data.begin());
        Mat& dwh = GradSlot(grads, PKey(l, dir, "wh"), wh.rows, wh.cols);
        kernels::MatMulTN(hp, dn, &dwh, /*acc=*/true);
      }
      Mat& db = GradSlot(grads, PKey(l, dir, "b"), 1, 4 * h);
      double* dbr = db.RowPtr(0);
      for (int64_t t = 0; t < T; ++t) {
        const double* dp = dpre.RowPtr(t);
        for (int j = 0; j < 4 * h; ++j) dbr[j] += dp[j];
      }
      kernels::MatMulNN(dpre, wx_t, &dinput, /*acc=*/true);
    }
    if (l > 0) {
      dx = std::move(dinput);
    } else if (d_embeddings != nullptr) {
      *d_embeddings = std::move(dinput);
    }
  }
}

}  // namespace acmix
