// Copyright 2026 The cachemimo Authors
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

#pragma once

#include <cstdint>
#include <random>

#include "cachemimo/types.hpp"

namespace cachemimo {

/// SplitMix64 finalizer; used to turn structured counters into seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// What a derived stream is used for. Distinct purposes never share draws, so
/// e.g. the fading of a trial is identical across cache schemes.
enum class StreamPurpose : std::uint64_t {
  kTopology = 1,
  kRequests = 2,
  kPlacement = 3,
  kFading = 4,
  kPilotNoise = 5,
  kDelivery = 6,
  kClosedFormTopology = 7,
  kTest = 99,
};

/// Seed for the stream addressed by (master, topology, fading, purpose).
/// Independent of scheduling: the same address always yields the same seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t topology_index,
                                    std::uint64_t fading_index, StreamPurpose purpose) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ (topology_index + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (fading_index + 0x85157af5ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

/// Random stream owned by one worker. Uniform draws are taken straight from the
/// engine bits so that topology draws are identical on every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, 1].
  double uniform_closed() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740991.0);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard circularly-symmetric complex Gaussian, E|z|^2 = 1.
  cdouble complex_normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cachemimo
