// src/base/kernels.h

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

#ifndef ACMIX_BASE_KERNELS_H_
#define ACMIX_BASE_KERNELS_H_

#include "base/mat.h"

namespace acmix {
namespace kernels {

// Hot numeric kernels, parallelized with OpenMP over output rows. Each output
// row is computed serially by one thread in the same order as the serial
// reference, so results are bit-identical to kernels::ref for any thread
// count. The serial variants in kernels::ref are kept for testing and for the
// benchmark tool.

// c = a * b, a: [m x k], b: [k x n]. If acc, adds into c instead.
void MatMulNN(const Mat& a, const Mat& b, Mat* c, bool acc = false);
// c = a^T * b, a: [m x p], b: [m x q], c: [p x q].
void MatMulTN(const Mat& a, const Mat& b, Mat* c, bool acc = false);
// c = a * b^T, a: [m x p], b: [q x p], c: [m x q].
void MatMulNT(const Mat& a, const Mat& b, Mat* c, bool acc = false);

Mat Transpose(const Mat& a);

// In-place row-wise softmax / log-softmax (max-subtracted).
void RowSoftmax(Mat* x);
void RowLogSoftmax(Mat* x);

// log(sum(exp(x_i))), max-subtracted; -inf for empty input.
double LogSumExp(const double* x, int64_t n);

namespace ref {
void MatMulNN(const Mat& a, const Mat& b, Mat* c, bool acc = false);
void MatMulTN(const Mat& a, const Mat& b, Mat* c, bool acc = false);
void MatMulNT(const Mat& a, const Mat& b, Mat* c, bool acc = false);
void RowSoftmax(Mat* x);
void RowLogSoftmax(Mat* x);
}  // namespace ref

}  // namespace kernels
}  // namespace acmix

#endif  // ACMIX_BASE_KERNELS_H_
