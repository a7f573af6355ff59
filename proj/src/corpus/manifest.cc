// src/corpus/manifest.cc

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

#include "corpus/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "base/errors.h"
#include "base/parallel.h"
#include "corpus/text-norm.h"
#include "corpus/wav-io.h"

namespace acmix {

namespace fs = std::filesystem;
using nlohmann::json;

const char* SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "?";
}

std::string ResolveAudioPath(const CorpusManifest& manifest,
                             const ManifestEntry& entry) {
  fs::path p(entry.audio);
  if (p.is_absolute() || manifest.dir.empty()) return entry.audio;
  return (fs::path(manifest.dir) / p).string();
}

CorpusManifest ReadManifest(const std::string& path, Split split,
                            bool check_audio) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open manifest: " + path);
  CorpusManifest m;
  m.split = split;
  m.dir = fs::path(path).parent_path().string();

  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": bad manifest JSON: " + e.what());
    }
    ManifestEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.audio = j.at("audio").get<std::string>();
      e.duration_s = j.at("duration_s").get<double>();
      std::string dom = j.at("domain").get<std::string>();
      if (dom == "source") {
        e.domain = Domain::kSource;
      } else if (dom == "target") {
        e.domain = Domain::kTarget;
      } else {
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": domain must be source|target, got '" + dom + "'");
      }
      e.text = j.at("text").get<std::string>();
    } catch (const json::exception& ex) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": missing or mistyped manifest field: " + ex.what());
    }
    if (!seen.insert(e.id).second) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": duplicate utterance id '" + e.id + "'");
    }
    m.entries.push_back(std::move(e));
  }
  if (check_audio) {
    for (const auto& e : m.entries) {
      std::string ap = ResolveAudioPath(m, e);
      if (!fs::exists(ap)) throw DataError("manifest audio missing: " + ap);
      CheckWavHeader(ap);
    }
  }
  return m;
}

void WriteManifest(const std::string& path, const CorpusManifest& manifest) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open for writing: " + path);
  for (const auto& e : manifest.entries) {
    json j;
    j["id"] = e.id;
    j["audio"] = e.audio;
    j["duration_s"] = e.duration_s;
    j["domain"] = DomainName(e.domain);
    j["text"] = e.text;
    os << j.dump() << "\n";
  }
  if (!os) throw DataError("write failed: " + path);
}

std::vector<Utterance> LoadUtterances(const CorpusManifest& manifest) {
  std::vector<Utterance> out(manifest.entries.size());
  ParallelFor(int64_t(manifest.entries.size()), [&](int64_t i) {
    const auto& e = manifest.entries[i];
    Utterance u;
    u.id = e.id;
    u.domain = e.domain;
    u.samples = ReadWav(ResolveAudioPath(manifest, e));
    u.transcript = NormalizeTranscript(e.text);
    out[i] = std::move(u);
  });
  return out;
}

}  // namespace acmix
