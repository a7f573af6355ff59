// src/corpus/wav-io.cc

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

#include "corpus/wav-io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "base/errors.h"
#include "corpus/utterance.h"

namespace acmix {

namespace {

struct WavInfo {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
  std::streamoff data_offset = 0;
  uint32_t data_bytes = 0;
};

template <typename T>
T ReadPod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

WavInfo ParseHeader(std::ifstream& is, const std::string& path) {
  char tag[4];
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "RIFF", 4) != 0)
    throw DataError(path + ": not a RIFF file");
  ReadPod<uint32_t>(is);  // riff size
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "WAVE", 4) != 0)
    throw DataError(path + ": not a WAVE file");

  WavInfo info;
  bool have_fmt = false;
  while (is.read(tag, 4)) {
    uint32_t chunk_size = ReadPod<uint32_t>(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      info.format = ReadPod<uint16_t>(is);
      info.channels = ReadPod<uint16_t>(is);
      info.sample_rate = ReadPod<uint32_t>(is);
      ReadPod<uint32_t>(is);  // byte rate
      ReadPod<uint16_t>(is);  // block align
      info.bits = ReadPod<uint16_t>(is);
      if (chunk_size > 16) is.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      info.data_offset = is.tellg();
      info.data_bytes = chunk_size;
      break;
    } else {
      is.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || info.data_offset == 0)
    throw DataError(path + ": missing fmt or data chunk");
  if (info.format != 1)
    throw DataError(path + ": unsupported codec (want PCM), format=" +
                    std::to_string(info.format));
  if (info.channels != 1)
    throw DataError(path + ": unsupported channels=" +
                    std::to_string(info.channels) + " (want mono)");
  if (info.sample_rate != uint32_t(kSampleRate))
    throw DataError(path + ": unsupported sample_rate=" +
                    std::to_string(info.sample_rate) + " (want 16000)");
  if (info.bits != 16)
    throw DataError(path + ": unsupported bits_per_sample=" +
                    std::to_string(info.bits) + " (want 16)");
  return info;
}

}  // namespace

std::vector<double> ReadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open wav: " + path);
  WavInfo info = ParseHeader(is, path);
  size_t n = info.data_bytes / 2;
  std::vector<int16_t> pcm(n);
  is.seekg(info.data_offset);
  is.read(reinterpret_cast<char*>(pcm.data()), std::streamsize(n * 2));
  if (!is) throw DataError(path + ": truncated data chunk");
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = double(pcm[i]) / 32768.0;
  return out;
}

void CheckWavHeader(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open wav: " + path);
  ParseHeader(is, path);
}

void WriteWav(const std::string& path, const std::vector<double>& samples) {
  std::vector<int16_t> pcm(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    double v = std::clamp(samples[i], -1.0, 1.0) * 32768.0;
    pcm[i] = int16_t(std::clamp(std::lround(v), long(-32768), long(32767)));
  }
  uint32_t data_bytes = uint32_t(pcm.size() * 2);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open for writing: " + path);

  auto put_u32 = [&](uint32_t v) { os.write(reinterpret_cast<char*>(&v), 4); };
  auto put_u16 = [&](uint16_t v) { os.write(reinterpret_cast<char*>(&v), 2); };
  os.write("RIFF", 4);
  put_u32(36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put_u32(16);
  put_u16(1);                      // PCM
  put_u16(1);                      // mono
  put_u32(uint32_t(kSampleRate));  // sample rate
  put_u32(uint32_t(kSampleRate) * 2);
  put_u16(2);
  put_u16(16);
  os.write("data", 4);
  put_u32(data_bytes);
  os.write(reinterpret_cast<const char*>(pcm.data()),
           std::streamsize(data_bytes));
  if (!os) throw DataError("write failed: " + path);
}

}  // namespace acmix
