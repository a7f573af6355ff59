// src/corpus/synth.cc

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

#include "corpus/synth.h"

#include <algorithm>
#include <cmath>

#include "base/errors.h"
#include "base/parallel.h"
#include "base/rng.h"

namespace acmix {

namespace {

// Fork tags for the seed-derived streams.
enum : uint64_t { kStreamWord = 1, kStreamUtt = 2, kStreamSpeaker = 3, kStreamNoise = 4 };

constexpr double kAmp = 0.22;
constexpr int kRampSamples = 80;  // 5 ms raised-cosine ramp at segment edges

void ValidateSpec(const SynthSpec& spec) {
  if (spec.vocab_size < 2)
    throw ConfigError("synth: vocab_size must be >= 2, got " +
                      std::to_string(spec.vocab_size));
  if (spec.words_min < 1 || spec.words_max < spec.words_min)
    throw ConfigError("synth: bad words_per_utt range");
  if (spec.speaker_count < 1) throw ConfigError("synth: speaker_count < 1");
  if (std::isnan(spec.noise_snr_db))
    throw ConfigError("synth: noise_snr_db is NaN");
  if (!(spec.accent_warp > 0.0))
    throw ConfigError("synth: accent_warp must be positive");
}

void AppendSegment(std::vector<double>* out, double freq_hz, int n,
                   double gain) {
  const double w = 2.0 * M_PI * freq_hz / double(kSampleRate);
  const size_t base = out->size();
  out->resize(base + size_t(n));
  for (int t = 0; t < n; ++t) {
    double env = 1.0;
    if (t < kRampSamples) env = 0.5 - 0.5 * std::cos(M_PI * t / kRampSamples);
    int tail = n - 1 - t;
    if (tail < kRampSamples)
      env = std::min(env, 0.5 - 0.5 * std::cos(M_PI * tail / kRampSamples));
    (*out)[base + t] = gain * kAmp * env * std::sin(w * t);
  }
}

}  // namespace

std::string WordText(int w) {
  static const char* kConsonants = "bdfgklmnprst";  // 12
  static const char* kVowels = "aeiou";             // 5
  std::string s;
  for (;;) {
    s.push_back(kConsonants[w % 12]);
    s.push_back(kVowels[(w / 12) % 5]);
    w /= 60;
    if (w == 0) break;
    --w;
  }
  return s;
}

std::vector<WordSegment> WordSegments(const SynthSpec& spec, int w) {
  Rng rng = Rng(spec.seed).Fork(kStreamWord, uint64_t(w));
  int n_seg = 2 + int(rng.RandInt(3));  // 2..4
  std::vector<WordSegment> segs(n_seg);
  for (auto& s : segs) {
    s.freq_hz = rng.Uniform(300.0, 3000.0);
    s.n_samples = int(std::lround(rng.Uniform(0.060, 0.090) * kSampleRate));
  }
  return segs;
}

std::vector<double> SynthWordSignal(const SynthSpec& spec, int w,
                                    double freq_scale, double gain) {
  std::vector<double> out;
  for (const auto& seg : WordSegments(spec, w)) {
    AppendSegment(&out, seg.freq_hz * freq_scale, seg.n_samples, gain);
  }
  return out;
}

std::vector<Utterance> SynthCorpus(const SynthSpec& spec, Domain domain,
                                   int count, int64_t index_offset,
                                   const std::string& id_prefix) {
  ValidateSpec(spec);
  if (count < 1) throw ConfigError("synth: count must be >= 1");

  const bool is_target = domain == Domain::kTarget;
  const double warp = is_target ? spec.accent_warp : 1.0;
  const bool add_noise = is_target && std::isfinite(spec.noise_snr_db);
  const Rng root(spec.seed);

  std::vector<Utterance> utts(count);
  ParallelFor(count, [&](int64_t i) {
    const int64_t index = index_offset + i;
    Rng rng = root.Fork(kStreamUtt, uint64_t(index));
    Utterance u;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06lld", (long long)index);
    u.id = id_prefix + buf;
    u.domain = domain;

    const int n_words =
        spec.words_min + int(rng.RandInt(spec.words_max - spec.words_min + 1));
    const int speaker = int(rng.RandInt(spec.speaker_count));
    Rng spk = root.Fork(kStreamSpeaker, uint64_t(speaker));
    const double pitch = spk.Uniform(0.92, 1.08);
    const double gain = spk.Uniform(0.6, 0.9);

    auto append_gap = [&](double lo_s, double hi_s) {
      int n = int(std::lround(rng.Uniform(lo_s, hi_s) * kSampleRate));
      u.samples.insert(u.samples.end(), size_t(n), 0.0);
    };

    append_gap(0.020, 0.040);
    for (int k = 0; k < n_words; ++k) {
      int w = int(rng.RandInt(spec.vocab_size));
      u.transcript.push_back(WordText(w));
      auto sig = SynthWordSignal(spec, w, pitch * warp, gain);
      u.samples.insert(u.samples.end(), sig.begin(), sig.end());
      append_gap(0.020, 0.035);
    }

    if (add_noise) {
      double rms = 0.0;
      for (double v : u.samples) rms += v * v;
      rms = std::sqrt(rms / double(u.samples.size()));
      const double noise_std =
          rms * std::pow(10.0, -spec.noise_snr_db / 20.0);
      Rng noise = root.Fork(kStreamNoise, uint64_t(index));
      for (double& v : u.samples) v += noise_std * noise.Gauss();
    }
    for (double& v : u.samples) v = std::clamp(v, -1.0, 1.0);
    utts[i] = std::move(u);
  });
  return utts;
}

}  // namespace acmix
