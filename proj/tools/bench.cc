// tools/bench.cc

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

// Times the OpenMP kernels against their serial references and checks they
// agree bit-exactly. --smoke shrinks the sizes for use as a CI test.

#include <cstdio>
#include <cstring>
#include <string>

#include <omp.h>

#include "base/kernels.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "corpus/synth.h"
#include "ctc/ctc-loss.h"
#include "encoder/encoder.h"
#include "encoder/features.h"
#include "spin/spin.h"

using namespace acmix;

namespace {

Mat RandomMat(int64_t r, int64_t c, Rng* rng, double scale = 1.0) {
  Mat m(r, c);
  for (auto& v : m.data) v = scale * rng->Gauss();
  return m;
}

struct BenchCase {
  const char* name;
  double serial_s;
  double parallel_s;
  double gflop;  // per run, when meaningful (0 = report time only)
  bool identical;
};

void Report(const BenchCase& b) {
  std::printf("%-28s serial %8.3f ms   omp %8.3f ms   speedup %4.2fx",
              b.name, 1e3 * b.serial_s, 1e3 * b.parallel_s,
              b.serial_s / b.parallel_s);
  if (b.gflop > 0.0) {
    std::printf("   %6.2f GF/s", b.gflop / b.parallel_s);
  }
  std::printf("   bit-equal %s\n", b.identical ? "yes" : "NO");
}

template <typename F>
double TimeBest(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    double t0 = omp_get_wtime();
    f();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
  const int reps = smoke ? 2 : 5;
  Rng rng(7);
  int failures = 0;

  std::printf("threads: %d\n", MaxThreads());

  {  // dense matmul
    const int64_t n = smoke ? 96 : 512;
    Mat a = RandomMat(n, n, &rng), b = RandomMat(n, n, &rng);
    Mat c1(n, n), c2(n, n);
    BenchCase bc{"matmul_nn", 0, 0, 2.0 * double(n) * n * n / 1e9, false};
    bc.serial_s = TimeBest([&] { kernels::ref::MatMulNN(a, b, &c1); }, reps);
    bc.parallel_s = TimeBest([&] { kernels::MatMulNN(a, b, &c2); }, reps);
    bc.identical = c1.data == c2.data;
    failures += !bc.identical;
    Report(bc);
  }

  {  // row softmax
    const int64_t rows = smoke ? 2000 : 100000, cols = 64;
    Mat x = RandomMat(rows, cols, &rng, 3.0);
    Mat y1 = x, y2 = x;
    BenchCase bc{"row_softmax", 0, 0, 0, false};
    bc.serial_s = TimeBest(
        [&] {
          y1 = x;
          kernels::ref::RowSoftmax(&y1);
        },
        reps);
    bc.parallel_s = TimeBest(
        [&] {
          y2 = x;
          kernels::RowSoftmax(&y2);
        },
        reps);
    bc.identical = y1.data == y2.data;
    failures += !bc.identical;
    Report(bc);
  }

  {  // sinkhorn code assignment (row/col passes parallelize internally)
    const int64_t n = smoke ? 256 : 2048, k = 64;
    Mat s = RandomMat(n, k, &rng, 0.1);
    SpinConfig cfg;
    cfg.sinkhorn_iters = 50;
    Mat q1, q2;
    BenchCase bc{"sinkhorn_50it", 0, 0, 0, false};
    bc.parallel_s = TimeBest([&] { q2 = AssignCodes(s, cfg); }, reps);
    {
      const int saved = MaxThreads();
      SetThreads(1);
      bc.serial_s = TimeBest([&] { q1 = AssignCodes(s, cfg); }, reps);
      SetThreads(saved);
    }
    bc.identical = q1.data == q2.data;
    failures += !bc.identical;
    Report(bc);
  }

  {  // log-mel extraction over a batch of utterances
    SynthSpec spec;
    spec.words_min = smoke ? 2 : 8;
    spec.words_max = smoke ? 3 : 10;
    auto utts = SynthCorpus(spec, Domain::kSource, smoke ? 4 : 16);
    FeatureConfig fcfg;
    LogMelExtractor logmel(fcfg);
    std::vector<Mat> f1(utts.size()), f2(utts.size());
    BenchCase bc{"logmel_batch", 0, 0, 0, false};
    bc.serial_s = TimeBest(
        [&] {
          for (size_t i = 0; i < utts.size(); ++i)
            f1[i] = logmel.Compute(utts[i].samples);
        },
        reps);
    bc.parallel_s = TimeBest(
        [&] {
          ParallelFor(int64_t(utts.size()), [&](int64_t i) {
            f2[size_t(i)] = logmel.Compute(utts[size_t(i)].samples);
          });
        },
        reps);
    bc.identical = true;
    for (size_t i = 0; i < utts.size(); ++i)
      bc.identical = bc.identical && f1[i].data == f2[i].data;
    failures += !bc.identical;
    Report(bc);
  }

  {  // batched encoder forward
    EncoderConfig ecfg;
    ecfg.n_layers = 4;
    ecfg.d_model = smoke ? 32 : 128;
    ecfg.seed = 3;
    EncoderState enc = InitEncoder(ecfg);
    const int batch = smoke ? 4 : 16;
    std::vector<Mat> feats;
    for (int i = 0; i < batch; ++i)
      feats.push_back(RandomMat(smoke ? 40 : 240, ecfg.feat.n_mels, &rng));
    std::vector<Mat> e1(feats.size()), e2(feats.size());
    BenchCase bc{"encode_batch", 0, 0, 0, false};
    bc.serial_s = TimeBest(
        [&] {
          for (size_t i = 0; i < feats.size(); ++i) e1[i] = Encode(enc, feats[i]);
        },
        reps);
    bc.parallel_s = TimeBest(
        [&] {
          ParallelFor(int64_t(feats.size()), [&](int64_t i) {
            e2[size_t(i)] = Encode(enc, feats[size_t(i)]);
          });
        },
        reps);
    bc.identical = true;
    for (size_t i = 0; i < feats.size(); ++i)
      bc.identical = bc.identical && e1[i].data == e2[i].data;
    failures += !bc.identical;
    Report(bc);
  }

  {  // batched CTC loss
    const int batch = smoke ? 4 : 16;
    const int64_t T = smoke ? 60 : 300, C = 28;
    std::vector<Mat> logps;
    std::vector<std::vector<int>> labels;
    for (int b = 0; b < batch; ++b) {
      Mat lp = RandomMat(T, C, &rng);
      kernels::RowLogSoftmax(&lp);
      logps.push_back(std::move(lp));
      std::vector<int> l;
      for (int i = 0; i < (smoke ? 10 : 40); ++i)
        l.push_back(1 + int(rng.RandInt(C - 1)));
      labels.push_back(std::move(l));
    }
    std::vector<double> l1(logps.size()), l2(logps.size());
    BenchCase bc{"ctc_loss_batch", 0, 0, 0, false};
    bc.serial_s = TimeBest(
        [&] {
          for (size_t i = 0; i < logps.size(); ++i)
            l1[i] = CtcLoss(logps[i], labels[i]).loss;
        },
        reps);
    bc.parallel_s = TimeBest(
        [&] {
          ParallelFor(int64_t(logps.size()), [&](int64_t i) {
            l2[size_t(i)] = CtcLoss(logps[size_t(i)], labels[size_t(i)]).loss;
          });
        },
        reps);
    bc.identical = l1 == l2;
    failures += !bc.identical;
    Report(bc);
  }

  if (failures > 0) {
    std::printf("FAILED: %d kernel(s) not bit-identical\n", failures);
    return 1;
  }
  return 0;
}
