// src/base/kernels.cc

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

#include "base/kernels.h"

#include <cassert>
#include <cmath>
#include <limits>

#include "base/parallel.h"

namespace acmix {
namespace kernels {

namespace {

// Row bodies shared by the parallel kernels and the serial references, so
// both paths run the exact same arithmetic in the exact same order.

inline void RowNN(const Mat& a, const Mat& b, Mat* c, bool acc, int64_t i) {
  const int64_t k = a.cols, n = b.cols;
  double* ci = c->RowPtr(i);
  if (!acc) {
    for (int64_t j = 0; j < n; ++j) ci[j] = 0.0;
  }
  const double* ai = a.RowPtr(i);
  for (int64_t p = 0; p < k; ++p) {
    const double av = ai[p];
    const double* bp = b.RowPtr(p);
    for (int64_t j = 0; j < n; ++j) ci[j] += av * bp[j];
  }
}

// Output row i of c = a^T b is column i of a swept over rows of b.
inline void RowTN(const Mat& a, const Mat& b, Mat* c, bool acc, int64_t i) {
  const int64_t m = a.rows, q = b.cols;
  double* ci = c->RowPtr(i);
  if (!acc) {
    for (int64_t j = 0; j < q; ++j) ci[j] = 0.0;
  }
  for (int64_t r = 0; r < m; ++r) {
    const double av = a(r, i);
    const double* br = b.RowPtr(r);
    for (int64_t j = 0; j < q; ++j) ci[j] += av * br[j];
  }
}

inline void RowNT(const Mat& a, const Mat& b, Mat* c, bool acc, int64_t i) {
  const int64_t p = a.cols, q = b.rows;
  const double* ai = a.RowPtr(i);
  double* ci = c->RowPtr(i);
  for (int64_t j = 0; j < q; ++j) {
    const double* bj = b.RowPtr(j);
    double s = 0.0;
    for (int64_t t = 0; t < p; ++t) s += ai[t] * bj[t];
    ci[j] = acc ? ci[j] + s : s;
  }
}

inline void RowSoftmaxOne(Mat* x, int64_t i) {
  const int64_t n = x->cols;
  double* r = x->RowPtr(i);
  double mx = -std::numeric_limits<double>::infinity();
  for (int64_t j = 0; j < n; ++j) mx = std::max(mx, r[j]);
  double s = 0.0;
  for (int64_t j = 0; j < n; ++j) {
    r[j] = std::exp(r[j] - mx);
    s += r[j];
  }
  const double inv = 1.0 / s;
  for (int64_t j = 0; j < n; ++j) r[j] *= inv;
}

inline void RowLogSoftmaxOne(Mat* x, int64_t i) {
  const int64_t n = x->cols;
  double* r = x->RowPtr(i);
  double mx = -std::numeric_limits<double>::infinity();
  for (int64_t j = 0; j < n; ++j) mx = std::max(mx, r[j]);
  double s = 0.0;
  for (int64_t j = 0; j < n; ++j) s += std::exp(r[j] - mx);
  const double lse = mx + std::log(s);
  for (int64_t j = 0; j < n; ++j) r[j] -= lse;
}

}  // namespace

void MatMulNN(const Mat& a, const Mat& b, Mat* c, bool acc) {
  assert(a.cols == b.rows && c->rows == a.rows && c->cols == b.cols);
  ParallelFor(a.rows, [&](int64_t i) { RowNN(a, b, c, acc, i); });
}

void MatMulTN(const Mat& a, const Mat& b, Mat* c, bool acc) {
  assert(a.rows == b.rows && c->rows == a.cols && c->cols == b.cols);
  // In a serial context an r-outer sweep streams a's rows contiguously; per
  // element the accumulation stays in ascending r, so the result is
  // bit-identical to the row-parallel form and to kernels::ref.
  if (omp_in_parallel() || omp_get_max_threads() == 1) {
    if (!acc) c->SetZero();
    for (int64_t r = 0; r < a.rows; ++r) {
      const double* ar = a.RowPtr(r);
      const double* br = b.RowPtr(r);
      for (int64_t i = 0; i < a.cols; ++i) {
        const double av = ar[i];
        double* ci = c->RowPtr(i);
        for (int64_t j = 0; j < b.cols; ++j) ci[j] += av * br[j];
      }
    }
    return;
  }
  ParallelFor(a.cols, [&](int64_t i) { RowTN(a, b, c, acc, i); });
}

void MatMulNT(const Mat& a, const Mat& b, Mat* c, bool acc) {
  assert(a.cols == b.cols && c->rows == a.rows && c->cols == b.rows);
  ParallelFor(a.rows, [&](int64_t i) { RowNT(a, b, c, acc, i); });
}

void RowSoftmax(Mat* x) {
  ParallelFor(x->rows, [&](int64_t i) { RowSoftmaxOne(x, i); });
}

void RowLogSoftmax(Mat* x) {
  ParallelFor(x->rows, [&](int64_t i) { RowLogSoftmaxOne(x, i); });
}

Mat Transpose(const Mat& a) {
  Mat t(a.cols, a.rows);
  for (int64_t i = 0; i < a.rows; ++i) {
    const double* r = a.RowPtr(i);
    for (int64_t j = 0; j < a.cols; ++j) t(j, i) = r[j];
  }
  return t;
}

double LogSumExp(const double* x, int64_t n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int64_t j = 0; j < n; ++j) mx = std::max(mx, x[j]);
  if (!std::isfinite(mx)) return mx;  // all -inf (or empty)
  double s = 0.0;
  for (int64_t j = 0; j < n; ++j) s += std::exp(x[j] - mx);
  return mx + std::log(s);
}

namespace ref {

void MatMulNN(const Mat& a, const Mat& b, Mat* c, bool acc) {
  assert(a.cols == b.rows && c->rows == a.rows && c->cols == b.cols);
  for (int64_t i = 0; i < a.rows; ++i) RowNN(a, b, c, acc, i);
}

void MatMulTN(const Mat& a, const Mat& b, Mat* c, bool acc) {
  assert(a.rows == b.rows && c->rows == a.cols && c->cols == b.cols);
  for (int64_t i = 0; i < a.cols; ++i) RowTN(a, b, c, acc, i);
}

void MatMulNT(const Mat& a, const Mat& b, Mat* c, bool acc) {
  assert(a.cols == b.cols && c->rows == a.rows && c->cols == b.rows);
  for (int64_t i = 0; i < a.rows; ++i) RowNT(a, b, c, acc, i);
}

void RowSoftmax(Mat* x) {
  for (int64_t i = 0; i < x->rows; ++i) RowSoftmaxOne(x, i);
}

void RowLogSoftmax(Mat* x) {
  for (int64_t i = 0; i < x->rows; ++i) RowLogSoftmaxOne(x, i);
}

}  // namespace ref

}  // namespace kernels
}  // namespace acmix
