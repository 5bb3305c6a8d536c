// Copyright 2026 The FuzzRL Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fuzzrl/rng.hpp"
#include "fuzzrl/targets.hpp"

using fuzzrl::CompareGateTarget;
using fuzzrl::CrashGateTarget;
using fuzzrl::ExecutionFeedback;
using fuzzrl::MagicHeaderTarget;
using fuzzrl::MutatorAction;
using fuzzrl::TargetByName;
using fuzzrl::TargetNames;
using fuzzrl::TargetProgram;
using fuzzrl::TestInput;
using fuzzrl::Verdict;

namespace {

TestInput Bytes(std::vector<uint8_t> b) {
  TestInput t;
  t.bytes = std::move(b);
  return t;
}

TestInput Text(const std::string& s) {
  return Bytes(std::vector<uint8_t>(s.begin(), s.end()));
}

std::set<uint32_t> EdgeSet(const ExecutionFeedback& fb) {
  return std::set<uint32_t>(fb.edges_hit.begin(), fb.edges_hit.end());
}

}  // namespace

TEST_CASE("magic header grants prefix edges, cascade and entry") {
  TargetProgram t = MagicHeaderTarget(8, {'P', 'N', 'G'});
  CHECK(t.total_edges == 3 + 8 + 1);  // ceiling = |magic| + depth + 1
  const uint32_t entry = 11;

  // Full match with one payload byte: prefix edges, first cascade edge.
  auto full = t.execute(Text("PNGx"));
  CHECK(EdgeSet(full) == std::set<uint32_t>{0, 1, 2, 3, entry});

  // Broken last byte: exactly the two matched prefix edges plus entry.
  auto broken = t.execute(Text("PNX"));
  CHECK(EdgeSet(broken) == std::set<uint32_t>{0, 1, entry});

  // Bare magic with no payload unlocks no cascade edge.
  auto bare = t.execute(Text("PNG"));
  CHECK(EdgeSet(bare) == std::set<uint32_t>{0, 1, 2, entry});

  // Deep payload unlocks the whole cascade, capped at depth.
  auto deep = t.execute(Text("PNG0123456789"));
  CHECK(EdgeSet(deep).size() == t.total_edges);

  // Empty input still reports the entry edge.
  auto empty = t.execute(Bytes({}));
  CHECK(EdgeSet(empty) == std::set<uint32_t>{entry});
}

TEST_CASE("magic_deep gates a tail-framed staircase behind one byte") {
  auto opt = TargetByName("magic_deep");
  REQUIRE(opt.has_value());
  const TargetProgram& t = *opt;
  CHECK(t.total_edges == 513);
  CHECK(t.seed_input_len == 1);
  const uint32_t entry = 512;

  // No magic byte: entry edge only, even with a well-framed tail.
  CHECK(EdgeSet(t.execute(Bytes({}))) == std::set<uint32_t>{entry});
  CHECK(EdgeSet(t.execute(Bytes({9, 9, 0xA5}))) == std::set<uint32_t>{entry});

  // Magic alone opens the gate but reaches no stair.
  CHECK(EdgeSet(t.execute(Bytes({0x7F}))) == std::set<uint32_t>{0, entry});

  // Gated and framed: stair id is length minus one.
  CHECK(EdgeSet(t.execute(Bytes({0x7F, 0xA5}))) ==
        std::set<uint32_t>{0, 1, entry});
  CHECK(EdgeSet(t.execute(Bytes({0x7F, 9, 9, 0xA5}))) ==
        std::set<uint32_t>{0, 3, entry});

  // The frame marker must be unique and must sit on the last byte.
  CHECK(EdgeSet(t.execute(Bytes({0x7F, 0xA5, 9}))) ==
        std::set<uint32_t>{0, entry});
  CHECK(EdgeSet(t.execute(Bytes({0x7F, 0xA5, 0xA5}))) ==
        std::set<uint32_t>{0, entry});

  auto gated = [](size_t n) {
    std::vector<uint8_t> v(n, 7);
    v.front() = 0x7F;
    v.back() = 0xA5;
    return v;
  };
  CHECK(EdgeSet(t.execute(Bytes(gated(512)))) ==
        std::set<uint32_t>{0, 511, entry});
  CHECK(EdgeSet(t.execute(Bytes(gated(600)))) ==
        std::set<uint32_t>{0, entry});  // beyond the staircase
}

TEST_CASE("compare gate single constant") {
  TargetProgram t = CompareGateTarget({0xDEADBEEF});
  CHECK(t.total_edges == 2);

  // Little-endian encoding of the constant at offset 0 passes the gate.
  auto pass = t.execute(Bytes({0xEF, 0xBE, 0xAD, 0xDE}));
  CHECK(EdgeSet(pass) == std::set<uint32_t>{0, 1});
  REQUIRE(pass.torc_events.size() == 1);
  CHECK(pass.torc_events[0].expected ==
        std::vector<uint8_t>{0xEF, 0xBE, 0xAD, 0xDE});

  // Too short for one window: entry edge only, no comparison performed.
  auto tiny = t.execute(Bytes({1, 2, 3}));
  CHECK(EdgeSet(tiny) == std::set<uint32_t>{0});
  CHECK(tiny.torc_events.empty());

  // Wrong window: entry edge, one torc event carrying the constant.
  auto wrong = t.execute(Bytes({9, 9, 9, 9}));
  CHECK(EdgeSet(wrong) == std::set<uint32_t>{0});
  REQUIRE(wrong.torc_events.size() == 1);
  CHECK(wrong.torc_events[0].expected ==
        std::vector<uint8_t>{0xEF, 0xBE, 0xAD, 0xDE});
  CHECK(wrong.torc_events[0].observed == std::vector<uint8_t>{9, 9, 9, 9});
}

TEST_CASE("compare gate chains stop at the first failure") {
  TargetProgram t = CompareGateTarget({0x01020304, 0x0A0B0C0D});
  CHECK(t.total_edges == 3);

  // First window passes, second fails: edge for gate 1 only, two events.
  std::vector<uint8_t> in = {0x04, 0x03, 0x02, 0x01, 0xFF, 0xFF, 0xFF, 0xFF};
  auto fb = t.execute(Bytes(in));
  CHECK(EdgeSet(fb) == std::set<uint32_t>{0, 1});
  CHECK(fb.torc_events.size() == 2);

  // Both pass.
  std::vector<uint8_t> good = {0x04, 0x03, 0x02, 0x01, 0x0D, 0x0C, 0x0B, 0x0A};
  auto fb2 = t.execute(Bytes(good));
  CHECK(EdgeSet(fb2) == std::set<uint32_t>{0, 1, 2});
  CHECK(fb2.torc_events.size() == 2);

  // First fails: chain stops before the second comparison.
  std::vector<uint8_t> bad = {0, 0, 0, 0, 0x0D, 0x0C, 0x0B, 0x0A};
  auto fb3 = t.execute(Bytes(bad));
  CHECK(EdgeSet(fb3) == std::set<uint32_t>{0});
  CHECK(fb3.torc_events.size() == 1);
}

TEST_CASE("bias_insert grants one edge per tail-framed exact length") {
  TargetProgram t = fuzzrl::BiasedMutatorTarget(MutatorAction::kInsertByte);
  CHECK(t.name == "bias_insert");
  CHECK(t.total_edges == 513);
  CHECK(t.seed_input_len == 1);

  CHECK(EdgeSet(t.execute(Bytes({}))) == std::set<uint32_t>{0});
  CHECK(EdgeSet(t.execute(Bytes({0xA5}))) == std::set<uint32_t>{0, 1});
  // The frame marker must sit on the last byte and appear exactly once.
  CHECK(EdgeSet(t.execute(Bytes({9, 9, 9}))) == std::set<uint32_t>{0});
  CHECK(EdgeSet(t.execute(Bytes({0xA5, 9, 9}))) == std::set<uint32_t>{0});
  CHECK(EdgeSet(t.execute(Bytes({9, 9, 0xA5}))) == std::set<uint32_t>{0, 3});
  CHECK(EdgeSet(t.execute(Bytes({0xA5, 9, 0xA5}))) == std::set<uint32_t>{0});
  // Interior content is free; only length and the marker matter.
  auto framed = [](size_t n) {
    std::vector<uint8_t> v(n, 7);
    v.back() = 0xA5;
    return v;
  };
  CHECK(EdgeSet(t.execute(Bytes(framed(300)))) == std::set<uint32_t>{0, 300});
  CHECK(EdgeSet(t.execute(Bytes(framed(512)))) == std::set<uint32_t>{0, 512});
  // Beyond the staircase only the entry edge fires.
  CHECK(EdgeSet(t.execute(Bytes(framed(600)))) == std::set<uint32_t>{0});
}

TEST_CASE("bias_change rewards exact byte values at length one") {
  TargetProgram t = fuzzrl::BiasedMutatorTarget(MutatorAction::kChangeByte);
  CHECK(t.total_edges == 257);
  CHECK(EdgeSet(t.execute(Bytes({0x41}))) == std::set<uint32_t>{0, 0x42});
  CHECK(EdgeSet(t.execute(Bytes({0x41, 0x41}))) == std::set<uint32_t>{0});
  CHECK(EdgeSet(t.execute(Bytes({}))) == std::set<uint32_t>{0});
}

TEST_CASE("bias_erase rewards shrinking below the seed length") {
  TargetProgram t = fuzzrl::BiasedMutatorTarget(MutatorAction::kEraseBytes);
  CHECK(t.total_edges == 257);
  CHECK(t.seed_input_len == 256);

  CHECK(EdgeSet(t.execute(Bytes(std::vector<uint8_t>(256, 1)))) ==
        std::set<uint32_t>{0});
  CHECK(EdgeSet(t.execute(Bytes(std::vector<uint8_t>(255, 1)))) ==
        std::set<uint32_t>{0, 1});
  CHECK(EdgeSet(t.execute(Bytes({}))) == std::set<uint32_t>{0, 256});
}

TEST_CASE("crash gate reports a crash only behind the magic") {
  TargetProgram t = CrashGateTarget({'B', 'O', 'O', 'M'});
  auto boom = t.execute(Text("BOOM!"));
  CHECK(boom.verdict == Verdict::kCrash);
  CHECK(EdgeSet(boom) == std::set<uint32_t>{0, 1});

  auto calm = t.execute(Text("BOO"));
  CHECK(calm.verdict == Verdict::kOk);
  CHECK(EdgeSet(calm) == std::set<uint32_t>{0});
}

TEST_CASE("registry resolves every listed target") {
  auto names = TargetNames();
  REQUIRE(names.size() == 7);
  for (const auto& name : names) {
    auto t = TargetByName(name);
    REQUIRE(t.has_value());
    CHECK(t->name == name);
    CHECK(t->total_edges > 0);
    CHECK(t->seed_input_len >= 1);
  }
  CHECK_FALSE(TargetByName("no_such_target").has_value());
}

TEST_CASE("execution is deterministic and edges stay below the ceiling") {
  fuzzrl::RngStream rng(31);
  for (const auto& name : TargetNames()) {
    auto t = TargetByName(name);
    REQUIRE(t.has_value());
    for (int i = 0; i < 200; ++i) {
      size_t len = rng.Below(40);
      std::vector<uint8_t> bytes(len);
      for (auto& b : bytes) b = static_cast<uint8_t>(rng.NextU64() & 0xFF);
      TestInput in = Bytes(bytes);

      auto fb1 = t->execute(in);
      auto fb2 = t->execute(in);
      REQUIRE(fb1.edges_hit == fb2.edges_hit);
      REQUIRE(fb1.verdict == fb2.verdict);
      REQUIRE(fb1.torc_events.size() == fb2.torc_events.size());

      REQUIRE_FALSE(fb1.edges_hit.empty());
      for (uint32_t e : fb1.edges_hit) REQUIRE(e < t->total_edges);
    }
  }
}

TEST_CASE("tiny magic target matches the brute-force reachable set") {
  // 2-byte magic, inputs of length <= 3 over a 4-symbol alphabet that
  // includes the magic bytes. Reachable by analysis: both prefix edges,
  // the first cascade edge (needs the 2-byte magic plus 1 payload byte)
  // and the entry edge. The second cascade edge needs length 4.
  TargetProgram t = MagicHeaderTarget(2, {'A', 'B'});
  const uint32_t entry = 4;
  std::set<uint32_t> expected = {0, 1, 2, entry};

  const std::vector<uint8_t> alphabet = {'A', 'B', 'C', 'D'};
  std::set<uint32_t> reached;
  size_t enumerated = 0;
  for (size_t len = 0; len <= 3; ++len) {
    std::vector<size_t> idx(len, 0);
    while (true) {
      std::vector<uint8_t> bytes(len);
      for (size_t i = 0; i < len; ++i) bytes[i] = alphabet[idx[i]];
      auto fb = t.execute(Bytes(bytes));
      reached.insert(fb.edges_hit.begin(), fb.edges_hit.end());
      ++enumerated;

      size_t carry = 0;
      while (carry < len && ++idx[carry] == alphabet.size()) {
        idx[carry] = 0;
        ++carry;
      }
      if (carry == len) break;
    }
  }
  CHECK(enumerated == 1 + 4 + 16 + 64);
  CHECK(reached == expected);
  CHECK(t.total_edges == 5);  // edge 3 is unreachable at length <= 3
}
