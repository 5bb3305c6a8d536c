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

#ifndef FUZZRL_COVERAGE_HPP_
#define FUZZRL_COVERAGE_HPP_

#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace fuzzrl {

enum class Verdict : uint8_t { kOk = 0, kCrash = 1 };

struct TorcEvent {
  std::vector<uint8_t> observed;  // the bytes the target read from the input
  std::vector<uint8_t> expected;  // the operand it compared against
};

// Everything one target execution reports back to the engine.
struct ExecutionFeedback {
  std::vector<uint32_t> edges_hit;  // distinct ids, entry edge always present
  std::vector<TorcEvent> torc_events;
  Verdict verdict = Verdict::kOk;
};

// The set of unique edges observed so far; cov_t of the reward signal.
// Monotone within an episode; Reset() is the episode boundary.
class CoverageMap {
 public:
  // Unions fb.edges_hit into the map, returns the number of previously
  // unseen edges.
  size_t Absorb(const ExecutionFeedback& fb) {
    size_t new_edges = 0;
    for (uint32_t e : fb.edges_hit) {
      if (edges_.insert(e).second) ++new_edges;
    }
    return new_edges;
  }

  size_t count() const { return edges_.size(); }
  bool Contains(uint32_t e) const { return edges_.count(e) != 0; }
  void Reset() { edges_.clear(); }
  const std::unordered_set<uint32_t>& edges() const { return edges_; }

 private:
  std::unordered_set<uint32_t> edges_;
};

// R_t = cov_t - cov_{t-1}. Negative deltas indicate an episode-reset
// bookkeeping bug upstream, not a valid reward.
inline uint64_t Reward(uint64_t cov_prev, uint64_t cov_now) {
  if (cov_now < cov_prev) {
    throw std::logic_error("coverage decreased within an episode");
  }
  return cov_now - cov_prev;
}

}  // namespace fuzzrl

#endif  // FUZZRL_COVERAGE_HPP_
