// src/base/rng.h

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

#ifndef ACMIX_BASE_RNG_H_
#define ACMIX_BASE_RNG_H_

#include <cstdint>
#include <random>

namespace acmix {

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic RNG with explicit distributions. std:: distributions are
// implementation-defined, so uniform/gaussian draws are derived from the raw
// mt19937_64 stream directly; the same seed gives the same sequence on any
// platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t Raw() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double Uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on [a, b).
  double Uniform(double a, double b) { return a + (b - a) * Uniform(); }

  // Standard normal via Box-Muller; pairs are cached.
  double Gauss() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 1.0 - Uniform();  // (0, 1]
    double u2 = Uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Uniform integer on [0, n), unbiased via rejection. n must be > 0.
  int64_t RandInt(int64_t n) {
    uint64_t un = uint64_t(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return int64_t(x % un);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Derive an independent stream. Forks are keyed off the construction seed,
  // not the generator state, so Fork(k) is reproducible no matter how many
  // draws were consumed.
  Rng Fork(uint64_t stream) const {
    return Rng(SplitMix64(seed_ + 0x9E3779B97F4A7C15ULL * (stream + 1)));
  }
  Rng Fork(uint64_t a, uint64_t b) const { return Fork(SplitMix64(a) ^ b); }
  Rng Fork(uint64_t a, uint64_t b, uint64_t c) const {
    return Fork(SplitMix64(SplitMix64(a) ^ b) ^ c);
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace acmix

#endif  // ACMIX_BASE_RNG_H_
