// Copyright 2026 The vmplace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VMPLACE_RANDOM_HPP
#define VMPLACE_RANDOM_HPP

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>

namespace vmp {

// mt19937_64 output is bit-exact per the standard; the draw helpers below are
// implemented here (not via std:: distributions) so that a fixed seed yields
// the same stream on every platform and standard library.
using RngEngine = std::mt19937_64;

/// splitmix64 finalizer; used to derive per-step / per-run sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
inline double uniform01(RngEngine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(RngEngine& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Unbiased integer in [lo, hi], rejection sampled.
inline long long uniform_int(RngEngine& rng, long long lo, long long hi) {
  assert(lo <= hi);
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<long long>(rng());
  const std::uint64_t bucket = UINT64_MAX / range;
  const std::uint64_t limit = bucket * range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<long long>(x / bucket);
}

/// Poisson variate via Knuth's product-of-uniforms method. Exact for the
/// moderate rates used here; exp(-lambda) must not underflow.
inline int sample_poisson(RngEngine& rng, double lambda) {
  assert(lambda > 0.0 && lambda < 700.0);
  const double threshold = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01(rng);
  } while (p > threshold);
  return k - 1;
}

}  // namespace vmp

#endif  // VMPLACE_RANDOM_HPP
