// src/corpus/manifest.h

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

#ifndef ACMIX_CORPUS_MANIFEST_H_
#define ACMIX_CORPUS_MANIFEST_H_

#include <string>
#include <vector>

#include "corpus/utterance.h"

namespace acmix {

enum class Split { kTrain, kValidation, kTest };

const char* SplitName(Split s);

// JSON-lines manifest; one object per line with fixed field names
// {id, audio, duration_s, domain, text}. Audio paths are interpreted
// relative to the manifest's directory unless absolute.
struct ManifestEntry {
  std::string id;
  std::string audio;
  double duration_s = 0.0;
  Domain domain = Domain::kSource;
  std::string text;  // raw transcript, normalized at load time
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  Split split = Split::kTrain;
  std::string dir;  // directory of the manifest file, for audio resolution
};

// Validates: unique ids within the manifest, every referenced audio file
// exists and parses (header check). check_audio=false skips the file checks
// (used when writing a manifest we just generated).
CorpusManifest ReadManifest(const std::string& path, Split split,
                            bool check_audio = true);
void WriteManifest(const std::string& path, const CorpusManifest& manifest);

// Reads audio and normalizes transcripts. Utterances whose transcript is
// empty after normalization are kept (SSL adaptation does not need text);
// supervised consumers must filter them.
std::vector<Utterance> LoadUtterances(const CorpusManifest& manifest);

std::string ResolveAudioPath(const CorpusManifest& manifest,
                             const ManifestEntry& entry);

}  // namespace acmix

#endif  // ACMIX_CORPUS_MANIFEST_H_
