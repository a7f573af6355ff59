// src/encoder/encoder.cc

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

#include "encoder/encoder.h"

#include <cmath>

#include <json.hpp>

#include "base/errors.h"
#include "base/kernels.h"
#include "base/rng.h"

namespace acmix {

namespace {

constexpr double kLnEps = 1e-5;

std::string LayerKey(int layer, const char* name) {
  return "layer" + std::to_string(layer) + "/" + name;
}

Mat RandnMat(int64_t r, int64_t c, double stddev, Rng* rng) {
  Mat m(r, c);
  for (auto& v : m.data) v = stddev * rng->Gauss();
  return m;
}

Mat ConstMat(int64_t r, int64_t c, double value) {
  Mat m(r, c);
  std::fill(m.data.begin(), m.data.end(), value);
  return m;
}

void CheckFinite(const EncoderState& state) {
  uint64_t checked = state.finite_checked_version.load(std::memory_order_acquire);
  if (checked == state.version) return;
  for (const auto& [name, m] : state.params) {
    if (!m.AllFinite()) {
      throw NumericalError("encoder state corrupt: NaN/Inf in " + name);
    }
  }
  state.finite_checked_version.store(state.version, std::memory_order_release);
}

// y = g (.) x_hat + b per row; caches x_hat and 1/std.
void LayerNormForward(const Mat& x, const Mat& g, const Mat& b, Mat* y,
                      Mat* x_hat, std::vector<double>* inv_std) {
  const int64_t T = x.rows, d = x.cols;
  y->Resize(T, d);
  x_hat->Resize(T, d);
  inv_std->assign(size_t(T), 0.0);
  for (int64_t t = 0; t < T; ++t) {
    const double* xr = x.RowPtr(t);
    double mu = 0.0;
    for (int64_t j = 0; j < d; ++j) mu += xr[j];
    mu /= double(d);
    double var = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      double c = xr[j] - mu;
      var += c * c;
    }
    var /= double(d);
    const double is = 1.0 / std::sqrt(var + kLnEps);
    (*inv_std)[size_t(t)] = is;
    double* xh = x_hat->RowPtr(t);
    double* yr = y->RowPtr(t);
    const double* gr = g.RowPtr(0);
    const double* br = b.RowPtr(0);
    for (int64_t j = 0; j < d; ++j) {
      xh[j] = (xr[j] - mu) * is;
      yr[j] = gr[j] * xh[j] + br[j];
    }
  }
}

// Standard layer-norm backward; accumulates dg/db when grads != nullptr.
void LayerNormBackward(const Mat& dy, const Mat& x_hat,
                       const std::vector<double>& inv_std, const Mat& g,
                       Mat* dx, Mat* dg, Mat* db) {
  const int64_t T = dy.rows, d = dy.cols;
  dx->Resize(T, d);
  for (int64_t t = 0; t < T; ++t) {
    const double* dyr = dy.RowPtr(t);
    const double* xh = x_hat.RowPtr(t);
    const double* gr = g.RowPtr(0);
    double* dxr = dx->RowPtr(t);
    double m1 = 0.0, m2 = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      const double dxh = dyr[j] * gr[j];
      m1 += dxh;
      m2 += dxh * xh[j];
    }
    m1 /= double(d);
    m2 /= double(d);
    const double is = inv_std[size_t(t)];
    for (int64_t j = 0; j < d; ++j) {
      const double dxh = dyr[j] * gr[j];
      dxr[j] = is * (dxh - m1 - xh[j] * m2);
    }
    if (dg != nullptr) {
      double* dgr = dg->RowPtr(0);
      double* dbr = db->RowPtr(0);
      for (int64_t j = 0; j < d; ++j) {
        dgr[j] += dyr[j] * xh[j];
        dbr[j] += dyr[j];
      }
    }
  }
}

Mat& GradSlot(ArrayMap* grads, const std::string& key, int64_t r, int64_t c) {
  auto it = grads->find(key);
  if (it == grads->end()) {
    it = grads->emplace(key, Mat(r, c)).first;
  }
  return it->second;
}

}  // namespace

EncoderState InitEncoder(const EncoderConfig& cfg) {
  if (cfg.n_layers < 1) throw ConfigError("encoder: n_layers must be >= 1");
  if (cfg.d_model < 8) throw ConfigError("encoder: d_model must be >= 8");
  EncoderState s;
  s.cfg = cfg;
  s.trainable.assign(size_t(cfg.n_layers), false);
  Rng rng(cfg.seed);
  const int d = cfg.d_model;
  const int in_dim = 2 * cfg.feat.n_mels;
  s.params["frontend/w"] = RandnMat(in_dim, d, std::sqrt(2.0 / in_dim), &rng);
  s.params["frontend/b"] = ConstMat(1, d, 0.0);
  for (int l = 1; l <= cfg.n_layers; ++l) {
    s.params[LayerKey(l, "ln_g")] = ConstMat(1, d, 1.0);
    s.params[LayerKey(l, "ln_b")] = ConstMat(1, d, 0.0);
    s.params[LayerKey(l, "wx")] = RandnMat(d, d, std::sqrt(2.0 / d), &rng);
    s.params[LayerKey(l, "wh")] = RandnMat(d, d, std::sqrt(2.0 / d), &rng);
    s.params[LayerKey(l, "b")] = ConstMat(1, d, 0.0);
  }
  return s;
}

void SetTrainable(EncoderState* state, int last_n) {
  const int L = state->cfg.n_layers;
  if (last_n < 0 || last_n > L) {
    throw ConfigError("set_trainable: last_n=" + std::to_string(last_n) +
                      " out of [0, " + std::to_string(L) + "]");
  }
  for (int l = 0; l < L; ++l) state->trainable[size_t(l)] = l >= L - last_n;
  ++state->version;
}

int LowestTrainableLayer(const EncoderState& state) {
  for (int l = 0; l < state.cfg.n_layers; ++l) {
    if (state.trainable[size_t(l)]) return l + 1;
  }
  return state.cfg.n_layers + 1;
}

Mat Encode(const EncoderState& state, const Mat& feats, EncodeCache* cache) {
  Mat x0 = EncodeUpTo(state, feats, 0);
  return EncodeFrom(state, x0, 1, cache);
}

Mat EncodeUpTo(const EncoderState& state, const Mat& feats, int n_blocks) {
  CheckFinite(state);
  const int d = state.cfg.d_model;
  const int n_mels = state.cfg.feat.n_mels;
  if (feats.cols != n_mels) {
    throw DataError("encode: feature dim " + std::to_string(feats.cols) +
                    " != n_mels " + std::to_string(n_mels));
  }
  const int64_t T = feats.rows;
  const int64_t To = (T + 1) / 2;  // stride-2 downsampling, zero-padded tail

  const Mat& w_in = state.params.at("frontend/w");
  const Mat& b_in = state.params.at("frontend/b");
  Mat x(To, d);
  for (int64_t t = 0; t < To; ++t) {
    double* xr = x.RowPtr(t);
    const double* br = b_in.RowPtr(0);
    for (int j = 0; j < d; ++j) xr[j] = br[j];
    for (int half = 0; half < 2; ++half) {
      const int64_t src = 2 * t + half;
      if (src >= T) break;
      const double* f = feats.RowPtr(src);
      for (int m = 0; m < n_mels; ++m) {
        const double fv = f[m];
        const double* wrow = w_in.RowPtr(half * n_mels + m);
        for (int j = 0; j < d; ++j) xr[j] += fv * wrow[j];
      }
    }
    for (int j = 0; j < d; ++j) xr[j] = std::tanh(xr[j]);
  }
  if (n_blocks > 0) x = EncodeFrom(state, x, 1, nullptr, n_blocks);
  return x;
}

Mat EncodeFrom(const EncoderState& state, const Mat& x_in, int first_block,
               EncodeCache* cache, int last_block) {
  const int d = state.cfg.d_model;
  const int64_t To = x_in.rows;
  if (last_block < 0) last_block = state.cfg.n_layers;

  if (cache != nullptr) {
    cache->t_out = To;
    cache->layers.assign(size_t(state.cfg.n_layers), EncoderLayerCache{});
  }

  Mat x = x_in;
  Mat pre(To, d);
  for (int l = first_block; l <= last_block; ++l) {
    EncoderLayerCache local;
    EncoderLayerCache& c =
        cache != nullptr ? cache->layers[size_t(l - 1)] : local;
    const Mat& ln_g = state.params.at(LayerKey(l, "ln_g"));
    const Mat& ln_b = state.params.at(LayerKey(l, "ln_b"));
    const Mat& wx = state.params.at(LayerKey(l, "wx"));
    const Mat& wh = state.params.at(LayerKey(l, "wh"));
    const Mat& b = state.params.at(LayerKey(l, "b"));

    LayerNormForward(x, ln_g, ln_b, &c.y, &c.x_hat, &c.inv_std);
    kernels::MatMulNN(c.y, wx, &pre);
    c.r.Resize(To, d);
    for (int64_t t = 0; t < To; ++t) {
      double* rt = c.r.RowPtr(t);
      const double* pt = pre.RowPtr(t);
      const double* bb = b.RowPtr(0);
      for (int j = 0; j < d; ++j) rt[j] = pt[j] + bb[j];
      if (t > 0) {
        const double* rprev = c.r.RowPtr(t - 1);
        for (int k = 0; k < d; ++k) {
          const double rv = rprev[k];
          const double* whk = wh.RowPtr(k);
          for (int j = 0; j < d; ++j) rt[j] += rv * whk[j];
        }
      }
      for (int j = 0; j < d; ++j) rt[j] = std::tanh(rt[j]);
    }
    // residual
    for (size_t i = 0; i < x.data.size(); ++i) x.data[i] += c.r.data[i];
  }
  return x;
}

void EncodeBackward(const EncoderState& state, const EncodeCache& cache,
                    const Mat& d_out, ArrayMap* grads) {
  const int lowest = LowestTrainableLayer(state);
  if (lowest > state.cfg.n_layers) return;  // everything frozen
  const int d = state.cfg.d_model;
  const int64_t To = cache.t_out;

  Mat dx = d_out;
  Mat dpre(To, d), dy(To, d), dxln(To, d);
  for (int l = state.cfg.n_layers; l >= lowest; --l) {
    const EncoderLayerCache& c = cache.layers[size_t(l - 1)];
    const Mat& wx = state.params.at(LayerKey(l, "wx"));
    const Mat& wh = state.params.at(LayerKey(l, "wh"));
    const Mat& ln_g = state.params.at(LayerKey(l, "ln_g"));
    const Mat wx_t = kernels::Transpose(wx);
    const Mat wh_t = kernels::Transpose(wh);
    const bool train = state.trainable[size_t(l - 1)];

    // Through the recurrence: dpre_t = (dr_t + dpre_{t+1} wh^T) (1 - r_t^2).
    for (int64_t t = To - 1; t >= 0; --t) {
      const double* rt = c.r.RowPtr(t);
      const double* dxt = dx.RowPtr(t);
      double* dp = dpre.RowPtr(t);
      for (int j = 0; j < d; ++j) dp[j] = dxt[j];
      if (t < To - 1) {
        const double* dnext = dpre.RowPtr(t + 1);
        for (int k = 0; k < d; ++k) {
          const double dv = dnext[k];
          const double* wtk = wh_t.RowPtr(k);
          for (int j = 0; j < d; ++j) dp[j] += dv * wtk[j];
        }
      }
      for (int j = 0; j < d; ++j) dp[j] *= 1.0 - rt[j] * rt[j];
    }

    if (train) {
      Mat& dwx = GradSlot(grads, LayerKey(l, "wx"), d, d);
      Mat& dwh = GradSlot(grads, LayerKey(l, "wh"), d, d);
      Mat& db = GradSlot(grads, LayerKey(l, "b"), 1, d);
      kernels::MatMulTN(c.y, dpre, &dwx, /*acc=*/true);
      if (To > 1) {
        Mat rprev(To - 1, d), dnext(To - 1, d);
        std::copy(c.r.data.begin(), c.r.data.begin() + (To - 1) * d,
                  rprev.data.begin());
        std::copy(dpre.data.begin() + d, dpre.data.end(), dnext.data.begin());
        kernels::MatMulTN(rprev, dnext, &dwh, /*acc=*/true);
      }
      double* dbr = db.RowPtr(0);
      for (int64_t t = 0; t < To; ++t) {
        const double* dp = dpre.RowPtr(t);
        for (int j = 0; j < d; ++j) dbr[j] += dp[j];
      }
    }

    kernels::MatMulNN(dpre, wx_t, &dy);
    Mat* dg = nullptr;
    Mat* dbeta = nullptr;
    if (train) {
      dg = &GradSlot(grads, LayerKey(l, "ln_g"), 1, d);
      dbeta = &GradSlot(grads, LayerKey(l, "ln_b"), 1, d);
    }
    LayerNormBackward(dy, c.x_hat, c.inv_std, ln_g, &dxln, dg, dbeta);
    // residual: d x_in = d x_out + gradient through the layer-norm path
    for (size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dxln.data[i];
  }
}

void SaveEncoderCheckpoint(const std::string& path, const EncoderState& state,
                           const ArrayMap& extra, int64_t step) {
  ArrayMap all = state.params;
  for (const auto& [k, v] : extra) all[k] = v;
  WriteArrayMap(path, all);

  nlohmann::json meta;
  meta["format"] = "acmix-encoder";
  meta["n_layers"] = state.cfg.n_layers;
  meta["d_model"] = state.cfg.d_model;
  meta["n_mels"] = state.cfg.feat.n_mels;
  meta["win_ms"] = state.cfg.feat.win_ms;
  meta["hop_ms"] = state.cfg.feat.hop_ms;
  meta["sample_rate"] = state.cfg.feat.sample_rate;
  meta["seed"] = state.cfg.seed;
  meta["step"] = step;
  meta["trainable"] = state.trainable;
  WriteTextFile(path + ".meta.json", meta.dump(2) + "\n");
}

EncoderState LoadEncoderCheckpoint(const std::string& path, ArrayMap* extra,
                                   int64_t* step) {
  ArrayMap all = ReadArrayMap(path);
  nlohmann::json meta = nlohmann::json::parse(ReadTextFile(path + ".meta.json"));
  EncoderState s;
  s.cfg.n_layers = meta.at("n_layers").get<int>();
  s.cfg.d_model = meta.at("d_model").get<int>();
  s.cfg.feat.n_mels = meta.at("n_mels").get<int>();
  s.cfg.feat.win_ms = meta.at("win_ms").get<int>();
  s.cfg.feat.hop_ms = meta.at("hop_ms").get<int>();
  s.cfg.feat.sample_rate = meta.at("sample_rate").get<int>();
  s.cfg.seed = meta.at("seed").get<uint64_t>();
  s.trainable = meta.at("trainable").get<std::vector<bool>>();
  if (step != nullptr) *step = meta.at("step").get<int64_t>();
  if (extra != nullptr) extra->clear();
  for (auto& [k, v] : all) {
    if (k.rfind("frontend/", 0) == 0 || k.rfind("layer", 0) == 0) {
      s.params[k] = std::move(v);
    } else if (extra != nullptr) {
      (*extra)[k] = std::move(v);
    }
  }
  return s;
}

}  // namespace acmix
