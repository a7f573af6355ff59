// src/base/ndarray-io.cc

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

#include "base/ndarray-io.h"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "base/errors.h"

namespace acmix {

namespace {
constexpr char kMagic[8] = {'A', 'C', 'M', 'X', 'A', 'R', 'R', '1'};

template <typename T>
void WritePod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void WriteArrayMap(const std::string& path, const ArrayMap& arrays) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  WritePod<uint64_t>(os, arrays.size());
  for (const auto& [name, m] : arrays) {
    WritePod<uint32_t>(os, uint32_t(name.size()));
    os.write(name.data(), std::streamsize(name.size()));
    WritePod<int64_t>(os, m.rows);
    WritePod<int64_t>(os, m.cols);
    os.write(reinterpret_cast<const char*>(m.data.data()),
             std::streamsize(m.data.size() * sizeof(double)));
  }
  if (!os) throw DataError("write failed: " + path);
}

ArrayMap ReadArrayMap(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::string(magic, 8) != std::string(kMagic, 8)) {
    throw DataError("bad array container magic in " + path);
  }
  uint64_t count = ReadPod<uint64_t>(is);
  ArrayMap out;
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t len = ReadPod<uint32_t>(is);
    std::string name(len, '\0');
    is.read(name.data(), len);
    int64_t rows = ReadPod<int64_t>(is);
    int64_t cols = ReadPod<int64_t>(is);
    if (!is || rows < 0 || cols < 0) {
      throw DataError("corrupt array container: " + path);
    }
    Mat m(rows, cols);
    is.read(reinterpret_cast<char*>(m.data.data()),
            std::streamsize(m.data.size() * sizeof(double)));
    if (!is) throw DataError("truncated array container: " + path);
    out.emplace(std::move(name), std::move(m));
  }
  return out;
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open for writing: " + path);
  os.write(contents.data(), std::streamsize(contents.size()));
  if (!os) throw DataError("write failed: " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace acmix
