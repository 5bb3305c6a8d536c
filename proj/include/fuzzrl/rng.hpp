// Copyright 2026 The FuzzRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FUZZRL_RNG_HPP_
#define FUZZRL_RNG_HPP_

#include <cstdint>

namespace fuzzrl {

// Counter-based pseudorandom stream. Draw i of stream `seed` is the
// SplitMix64 finalizer applied to seed + (i+1) * golden gamma, so a
// (seed, counter) pair fully determines every future draw on any
// platform. All randomness in the project flows through this type so
// runs can be replayed bit-exactly.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  uint64_t NextU64() {
    uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). n must be > 0. Uses the fixed-point multiply map
  // so the result depends only on the draw, never on platform modulo
  // behaviour.
  uint64_t Below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(NextU64()) * n) >> 64);
  }

  size_t Index(size_t n) { return static_cast<size_t>(Below(n)); }

  bool Coin() { return (NextU64() >> 63) != 0; }

  // Uniform double in [0, 1) with 53 significant bits.
  double Real01() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  uint64_t seed() const { return seed_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t counter_;
};

}  // namespace fuzzrl

#endif  // FUZZRL_RNG_HPP_
