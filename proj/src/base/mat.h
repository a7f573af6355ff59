// src/base/mat.h

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

#ifndef ACMIX_BASE_MAT_H_
#define ACMIX_BASE_MAT_H_

#include <cmath>
#include <cstdint>
#include <vector>

namespace acmix {

// Dense row-major double matrix. All numerics in this project are double
// precision; shapes are small (desk scale), so a plain vector is enough.
struct Mat {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int64_t r, int64_t c) : rows(r), cols(c), data(size_t(r) * size_t(c), 0.0) {}

  double& operator()(int64_t i, int64_t j) { return data[size_t(i) * cols + j]; }
  double operator()(int64_t i, int64_t j) const { return data[size_t(i) * cols + j]; }

  double* RowPtr(int64_t i) { return data.data() + size_t(i) * cols; }
  const double* RowPtr(int64_t i) const { return data.data() + size_t(i) * cols; }

  size_t Size() const { return data.size(); }
  bool Empty() const { return data.empty(); }
  bool SameShape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  void SetZero() { std::fill(data.begin(), data.end(), 0.0); }
  void Resize(int64_t r, int64_t c) {
    rows = r;
    cols = c;
    data.assign(size_t(r) * size_t(c), 0.0);
  }

  bool AllFinite() const {
    for (double v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

}  // namespace acmix

#endif  // ACMIX_BASE_MAT_H_
