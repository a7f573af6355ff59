// src/base/parallel.h

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

#ifndef ACMIX_BASE_PARALLEL_H_
#define ACMIX_BASE_PARALLEL_H_

#include <cstdint>
#include <exception>
#include <utility>

#include <omp.h>

namespace acmix {

// Parallelism policy: OpenMP over disjoint-output loops only. Reductions are
// always performed serially in index order after the parallel region, so every
// result is bit-identical regardless of thread count.

inline int MaxThreads() { return omp_get_max_threads(); }
inline void SetThreads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

// Runs f(i) for i in [0, n). Bodies must write disjoint state. Nested calls
// (from inside an enclosing ParallelFor) run serially on the calling thread.
// The first exception thrown by a body is rethrown after the loop completes.
template <typename F>
void ParallelFor(int64_t n, F&& f) {
  if (n <= 0) return;
  if (n == 1 || omp_in_parallel() || omp_get_max_threads() == 1) {
    for (int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical
      {
        if (!err) err = std::current_exception();
      }
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace acmix

#endif  // ACMIX_BASE_PARALLEL_H_
