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

#ifndef FUZZRL_TARGETS_HPP_
#define FUZZRL_TARGETS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fuzzrl/coverage.hpp"
#include "fuzzrl/mutators.hpp"
#include "fuzzrl/test_input.hpp"

namespace fuzzrl {

// A synthetic test program with built-in edge instrumentation. execute is
// deterministic and side-effect-free; every reported edge id is below
// total_edges.
struct TargetProgram {
  std::string name;
  std::function<ExecutionFeedback(const TestInput&)> execute;
  uint32_t total_edges = 0;
  size_t seed_input_len = 1;  // length of the single seed input
};

// Coverage plateau with breakthrough. Edge ids:
//   i in [0, |magic|)            : input matches magic[0..i]
//   |magic| + j, j in [0, depth) : full magic matched and the input carries
//                                  at least j+1 payload bytes past it
//   |magic| + depth              : entry edge (every execution)
// Ceiling: |magic| + depth + 1.
TargetProgram MagicHeaderTarget(size_t depth, std::vector<uint8_t> magic);

// Chain of gated 32-bit comparisons. Edge 0 is the entry edge; comparison
// k reads the little-endian window at offset 4k, reports a TorcEvent, and
// grants edge k+1 on equality; a failed comparison stops the chain.
// Ceiling: |constants| + 1.
TargetProgram CompareGateTarget(std::vector<uint32_t> constants);

// Coverage frontier unlockable (with non-negligible probability) only by
// one operator class. dominant must be one of InsertByte, ChangeByte,
// EraseBytes.
TargetProgram BiasedMutatorTarget(MutatorAction dominant);

// Crash verdict behind a magic prefix; the only built-in target that ever
// reports Verdict::kCrash.
TargetProgram CrashGateTarget(std::vector<uint8_t> magic);

// Name-based registry used by the CLI and the bench runner.
std::optional<TargetProgram> TargetByName(const std::string& name);
std::vector<std::string> TargetNames();

}  // namespace fuzzrl

#endif  // FUZZRL_TARGETS_HPP_
