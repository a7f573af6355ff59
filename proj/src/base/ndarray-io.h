// src/base/ndarray-io.h

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

#ifndef ACMIX_BASE_NDARRAY_IO_H_
#define ACMIX_BASE_NDARRAY_IO_H_

#include <map>
#include <string>

#include "base/mat.h"

namespace acmix {

// Named-array container used for checkpoints. Keys are slash-separated
// ("layer2/wx", "spin/prototypes", "head/out_w"). Binary little-endian;
// write-then-read round-trips bit-exactly. Metadata lives in a JSON sidecar
// next to the container (see WriteTextFile/ReadTextFile for that).
using ArrayMap = std::map<std::string, Mat>;

void WriteArrayMap(const std::string& path, const ArrayMap& arrays);
ArrayMap ReadArrayMap(const std::string& path);

// Small helpers for sidecars and reports.
void WriteTextFile(const std::string& path, const std::string& contents);
std::string ReadTextFile(const std::string& path);

}  // namespace acmix

#endif  // ACMIX_BASE_NDARRAY_IO_H_
