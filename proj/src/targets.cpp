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

#include "fuzzrl/targets.hpp"

#include <algorithm>
#include <cassert>

namespace fuzzrl {

namespace {

std::vector<uint8_t> LeBytes(uint32_t v) {
  return {static_cast<uint8_t>(v & 0xFF), static_cast<uint8_t>((v >> 8) & 0xFF),
          static_cast<uint8_t>((v >> 16) & 0xFF),
          static_cast<uint8_t>((v >> 24) & 0xFF)};
}

constexpr size_t kStair = 256;       // staircase height of the biased targets
constexpr size_t kInsertStair = 512;  // taller so long runs keep discovering

}  // namespace

TargetProgram MagicHeaderTarget(size_t depth, std::vector<uint8_t> magic) {
  assert(depth >= 1 && !magic.empty());
  TargetProgram t;
  t.name = "magic_header";
  t.total_edges = static_cast<uint32_t>(magic.size() + depth + 1);
  const uint32_t entry = static_cast<uint32_t>(magic.size() + depth);
  t.execute = [depth, magic = std::move(magic),
               entry](const TestInput& in) -> ExecutionFeedback {
    ExecutionFeedback fb;
    fb.edges_hit.push_back(entry);
    size_t matched = 0;
    while (matched < magic.size() && matched < in.size() &&
           in.bytes[matched] == magic[matched]) {
      fb.edges_hit.push_back(static_cast<uint32_t>(matched));
      ++matched;
    }
    if (matched == magic.size()) {
      size_t payload = in.size() - magic.size();
      size_t unlocked = std::min(payload, depth);
      for (size_t j = 0; j < unlocked; ++j) {
        fb.edges_hit.push_back(static_cast<uint32_t>(magic.size() + j));
      }
    }
    return fb;
  };
  return t;
}

TargetProgram CompareGateTarget(std::vector<uint32_t> constants) {
  assert(!constants.empty());
  TargetProgram t;
  t.name = "compare_gate";
  t.total_edges = static_cast<uint32_t>(constants.size() + 1);
  t.execute = [constants =
                   std::move(constants)](const TestInput& in) -> ExecutionFeedback {
    ExecutionFeedback fb;
    fb.edges_hit.push_back(0);
    for (size_t k = 0; k < constants.size(); ++k) {
      size_t off = 4 * k;
      if (off + 4 > in.size()) break;
      uint32_t got = 0;
      for (size_t i = 0; i < 4; ++i) {
        got |= static_cast<uint32_t>(in.bytes[off + i]) << (8 * i);
      }
      TorcEvent ev;
      ev.observed = LeBytes(got);
      ev.expected = LeBytes(constants[k]);
      fb.torc_events.push_back(std::move(ev));
      if (got != constants[k]) break;
      fb.edges_hit.push_back(static_cast<uint32_t>(k + 1));
    }
    return fb;
  };
  return t;
}

TargetProgram BiasedMutatorTarget(MutatorAction dominant) {
  TargetProgram t;
  switch (dominant) {
    case MutatorAction::kInsertByte: {
      // Tail-framed length staircase: one edge per exact length, valid
      // only when the frame marker appears exactly once, on the last
      // byte. Inserting non-marker bytes before the marker keeps an
      // entry valid at a new length; crossover either truncates mid
      // donor (random tail) or concatenates two frames (interior
      // marker), and length-preserving operators never reach new
      // stairs, so the frontier belongs to the insert class.
      t.name = "bias_insert";
      t.total_edges = kInsertStair + 1;
      t.execute = [](const TestInput& in) -> ExecutionFeedback {
        ExecutionFeedback fb;
        fb.edges_hit.push_back(0);
        if (!in.empty() && in.size() <= kInsertStair &&
            in.bytes.back() == 0xA5 &&
            std::count(in.bytes.begin(), in.bytes.end(), 0xA5) == 1) {
          fb.edges_hit.push_back(static_cast<uint32_t>(in.size()));
        }
        return fb;
      };
      break;
    }
    case MutatorAction::kChangeByte: {
      // One edge per value of the single byte, granted at length 1 only;
      // length-changing operators leave the frontier untouched.
      t.name = "bias_change";
      t.total_edges = 257;
      t.execute = [](const TestInput& in) -> ExecutionFeedback {
        ExecutionFeedback fb;
        fb.edges_hit.push_back(0);
        if (in.size() == 1) {
          fb.edges_hit.push_back(1u + in.bytes[0]);
        }
        return fb;
      };
      break;
    }
    case MutatorAction::kEraseBytes: {
      // Starts from a long seed; one edge per length strictly below it,
      // so only shrinking operators progress.
      t.name = "bias_erase";
      t.total_edges = kStair + 1;
      t.seed_input_len = kStair;
      t.execute = [](const TestInput& in) -> ExecutionFeedback {
        ExecutionFeedback fb;
        fb.edges_hit.push_back(0);
        if (in.size() < kStair) {
          fb.edges_hit.push_back(static_cast<uint32_t>(kStair - in.size()));
        }
        return fb;
      };
      break;
    }
    default:
      assert(false && "unsupported dominant action");
      break;
  }
  return t;
}

TargetProgram CrashGateTarget(std::vector<uint8_t> magic) {
  assert(!magic.empty());
  TargetProgram t;
  t.name = "crash_gate";
  t.total_edges = 2;
  t.execute = [magic = std::move(magic)](const TestInput& in) -> ExecutionFeedback {
    ExecutionFeedback fb;
    fb.edges_hit.push_back(0);
    if (in.size() >= magic.size() &&
        std::equal(magic.begin(), magic.end(), in.bytes.begin())) {
      fb.edges_hit.push_back(1);
      fb.verdict = Verdict::kCrash;
    }
    return fb;
  };
  return t;
}

std::optional<TargetProgram> TargetByName(const std::string& name) {
  if (name == "magic_header") {
    return MagicHeaderTarget(8, {'P', 'N', 'G'});
  }
  if (name == "magic_deep") {
    // One-byte magic gate in front of a tail-framed length staircase.
    // Edge 0 is the gate (magic matched), edge len-1 fires for a gated
    // input of exact length len in [2, kInsertStair] whose single frame
    // marker sits on the last byte, and the entry edge is always hit.
    // The gate is the plateau; depth past it grows one length at a time.
    TargetProgram t;
    t.name = "magic_deep";
    t.total_edges = static_cast<uint32_t>(kInsertStair + 1);
    t.execute = [](const TestInput& in) -> ExecutionFeedback {
      ExecutionFeedback fb;
      fb.edges_hit.push_back(static_cast<uint32_t>(kInsertStair));
      if (in.empty() || in.bytes[0] != 0x7F) return fb;
      fb.edges_hit.push_back(0);
      if (in.size() >= 2 && in.size() <= kInsertStair &&
          in.bytes.back() == 0xA5 &&
          std::count(in.bytes.begin(), in.bytes.end(), 0xA5) == 1) {
        fb.edges_hit.push_back(static_cast<uint32_t>(in.size() - 1));
      }
      return fb;
    };
    return t;
  }
  if (name == "compare_gate") {
    return CompareGateTarget({0xDEADBEEF, 0x13371337, 0xCAFEBABE, 0x0BADF00D});
  }
  if (name == "bias_insert") {
    return BiasedMutatorTarget(MutatorAction::kInsertByte);
  }
  if (name == "bias_change") {
    return BiasedMutatorTarget(MutatorAction::kChangeByte);
  }
  if (name == "bias_erase") {
    return BiasedMutatorTarget(MutatorAction::kEraseBytes);
  }
  if (name == "crash_gate") {
    return CrashGateTarget({'B', 'O', 'O', 'M'});
  }
  return std::nullopt;
}

std::vector<std::string> TargetNames() {
  return {"magic_header", "magic_deep",  "compare_gate", "bias_insert",
          "bias_change",  "bias_erase",  "crash_gate"};
}

}  // namespace fuzzrl
