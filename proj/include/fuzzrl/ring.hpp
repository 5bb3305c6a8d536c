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

#ifndef FUZZRL_RING_HPP_
#define FUZZRL_RING_HPP_

#include <atomic>
#include <cstdint>
#include <vector>

#include "fuzzrl/mutators.hpp"
#include "fuzzrl/rng.hpp"
#include "fuzzrl/test_input.hpp"

namespace fuzzrl {

// Single-producer/single-consumer action buffer between the agent
// (writer) and the engine (reader).
//
// Fixed capacity k. The writer replaces the oldest slot; the reader
// cycles through all k slots and never blocks, so stale actions repeat
// until the agent supplies new ones. Each slot is one atomic word
// holding the action plus a derived check pattern, so a read observes
// either the old or the new action in full, never a torn value.
class ActionRing {
 public:
  ActionRing(size_t capacity, RngStream& seed_rng)
      : slots_(capacity), write_idx_(0), read_idx_(0) {
    for (auto& s : slots_) {
      s.store(Encode(ActionFromIndex(static_cast<uint8_t>(
                  seed_rng.Below(kNumActions)))),
              std::memory_order_relaxed);
    }
  }

  ActionRing(const ActionRing&) = delete;
  ActionRing& operator=(const ActionRing&) = delete;

  // Agent thread only.
  void Write(MutatorAction a) {
    slots_[write_idx_].store(Encode(a), std::memory_order_release);
    write_idx_ = (write_idx_ + 1) % slots_.size();
    writes_.fetch_add(1, std::memory_order_relaxed);
  }

  // Engine thread only.
  MutatorAction ReadNext() {
    uint32_t v = slots_[read_idx_].load(std::memory_order_acquire);
    read_idx_ = (read_idx_ + 1) % slots_.size();
    return Decode(v);
  }

  size_t capacity() const { return slots_.size(); }
  uint64_t writes() const { return writes_.load(std::memory_order_relaxed); }

  // Slot encoding, exposed for the torn-read stress test.
  static uint32_t Encode(MutatorAction a) {
    uint32_t b = ActionIndex(a);
    return b | (Check(b) << 8);
  }
  static MutatorAction Decode(uint32_t v) {
    uint32_t b = v & 0xFF;
    if (Check(b) != (v >> 8) || b >= kNumActions) {
      // Unreachable with atomic slots; fail safe rather than propagate
      // a corrupt action.
      b = 0;
    }
    return static_cast<MutatorAction>(b);
  }
  static bool ValidEncoding(uint32_t v) {
    uint32_t b = v & 0xFF;
    return b < kNumActions && Check(b) == (v >> 8);
  }

 private:
  static uint32_t Check(uint32_t b) { return (b * 2654435761u + 0xA5) & 0xFFFFFF; }

  std::vector<std::atomic<uint32_t>> slots_;
  size_t write_idx_;  // writer-owned
  size_t read_idx_;   // reader-owned
  std::atomic<uint64_t> writes_{0};
};

// One published engine observation: the most recently generated test
// input plus counters, consistent as a unit.
struct Snapshot {
  TestInput last_input;
  uint64_t cov = 0;
  uint64_t step = 0;
  uint64_t wallclock_ns = 0;
  bool final_snapshot = false;
};

// Wait-free single-writer/single-reader triple buffer. The writer always
// has a free buffer to fill (publishing never waits on the reader); the
// reader always sees the most recent complete snapshot.
class SnapshotCell {
 public:
  SnapshotCell() : mid_(2), write_idx_(0), read_idx_(1) {}

  SnapshotCell(const SnapshotCell&) = delete;
  SnapshotCell& operator=(const SnapshotCell&) = delete;

  // Engine thread only.
  void Publish(Snapshot s) {
    buf_[write_idx_] = std::move(s);
    uint32_t prev = mid_.exchange(write_idx_ | kFresh,
                                  std::memory_order_acq_rel);
    write_idx_ = prev & kIdxMask;
  }

  // Agent thread only. Returns true and fills *out when a snapshot newer
  // than the last consumed one is available.
  bool Consume(Snapshot* out) {
    if (!(mid_.load(std::memory_order_acquire) & kFresh)) return false;
    uint32_t prev = mid_.exchange(read_idx_, std::memory_order_acq_rel);
    read_idx_ = prev & kIdxMask;
    *out = buf_[read_idx_];
    return (prev & kFresh) != 0;
  }

 private:
  static constexpr uint32_t kIdxMask = 0x3;
  static constexpr uint32_t kFresh = 0x4;

  Snapshot buf_[3];
  std::atomic<uint32_t> mid_;
  uint32_t write_idx_;  // writer-owned
  uint32_t read_idx_;   // reader-owned
};

}  // namespace fuzzrl

#endif  // FUZZRL_RING_HPP_
