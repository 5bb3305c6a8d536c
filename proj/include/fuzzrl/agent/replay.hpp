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

#ifndef FUZZRL_AGENT_REPLAY_HPP_
#define FUZZRL_AGENT_REPLAY_HPP_

#include <cstdint>
#include <vector>

#include "fuzzrl/nn/q_network.hpp"
#include "fuzzrl/rng.hpp"

namespace fuzzrl {

// Observation as stored in replay: raw input bytes, expanded to the bit
// vector on demand (storing 50k bit vectors would be ~25x larger).
struct CompactObs {
  std::vector<uint8_t> input;
  uint64_t cov = 0;
  uint64_t step = 0;
};

// Expands to the 8*max_len bit vector of the env encoding (MSB first).
std::vector<uint8_t> ExpandBits(const std::vector<uint8_t>& input,
                                size_t obs_bits);

struct Transition {
  CompactObs obs;
  CompactObs next_obs;
  uint8_t action = 0;
  Real reward = 0;
  bool done = false;
  // The agent's recurrent state when obs was consumed, and right after
  // (i.e. the state in effect at next_obs). Replayed single transitions
  // restart the recurrence from these snapshots.
  RecurrentState state_before;
  RecurrentState state_mid;
};

// Proportional prioritized replay over a sum tree.
//
// Leaves store priority^alpha; sampling probability of item i is
// leaf_i / sum(leaves). Bounded capacity with oldest-first eviction; new
// items enter at the maximum raw priority seen so far.
class PrioritizedReplay {
 public:
  PrioritizedReplay(size_t capacity, double alpha);

  struct Sampled {
    size_t index = 0;
    double weight = 0;  // (N * P(i))^-beta, normalized by the batch max
    double prob = 0;    // P(i) at sampling time
  };

  size_t Add(Transition t);  // returns the slot index written
  std::vector<Sampled> SampleBatch(size_t batch, double beta, RngStream& rng);
  void UpdatePriority(size_t index, double raw_priority);

  Transition& Get(size_t index) { return items_[index]; }
  const Transition& Get(size_t index) const { return items_[index]; }

  size_t size() const { return size_; }
  size_t capacity() const { return capacity_; }
  double total() const { return tree_[1]; }
  double LeafValue(size_t index) const { return tree_[leaves_ + index]; }
  double max_raw_priority() const { return max_raw_priority_; }

 private:
  void SetLeaf(size_t index, double value);
  size_t SampleIndex(double u) const;

  size_t capacity_;
  double alpha_;
  size_t leaves_;            // next power of two >= capacity
  std::vector<double> tree_;  // 1-based heap layout, size 2*leaves_
  std::vector<Transition> items_;
  size_t size_ = 0;
  size_t next_ = 0;  // circular write cursor (oldest-first eviction)
  double max_raw_priority_ = 1.0;
};

}  // namespace fuzzrl

#endif  // FUZZRL_AGENT_REPLAY_HPP_
