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

#ifndef FUZZRL_ENV_HPP_
#define FUZZRL_ENV_HPP_

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fuzzrl/engine.hpp"
#include "fuzzrl/mutators.hpp"
#include "fuzzrl/test_input.hpp"

namespace fuzzrl {

// Bit-array view of a test input: byte j occupies bits 8j..8j+7,
// most-significant bit first; positions past the input are zero. The aux
// fields restore injectivity (trailing-zero padding ambiguity) and feed
// logging, not the learner.
struct Observation {
  std::vector<uint8_t> bits;  // length 8*max_len, each element 0 or 1
  uint64_t cov = 0;
  uint64_t step = 0;
  uint64_t input_len = 0;
};

Observation EncodeObservation(const TestInput& input, size_t max_len);

// Inverse of the bit encoding given the original length.
std::vector<uint8_t> DecodeObservationBits(const std::vector<uint8_t>& bits,
                                           size_t input_len);

// The versioned, hash-identifiable run configuration. Serialized as flat
// key-value text with a fixed key order; the FNV hash of that text names
// run directories and stamps reports.
struct EnvConfig {
  std::string target = "magic_header";
  uint64_t budget_execs = 200000;
  double budget_secs = 0;
  size_t ring_k = 32;
  size_t snapshot_s = 256;
  size_t max_len = 4096;
  uint64_t seed = 1;
  std::string version = "fuzzrl-env-v1";

  std::string ToText() const;
  static std::optional<EnvConfig> FromText(std::string_view text);
  uint64_t Hash() const;
  RunConfig ToRunConfig() const;
};

// Gym-style facade over a running Engine.
//
// Sync mode interleaves agent and engine deterministically on one
// thread: Step drives the engine until the next snapshot is published
// (exactly snapshot_s executions except at the budget edge). Async mode
// runs the engine on its own thread at full speed and Step waits only
// for the next published snapshot; the engine never waits for the agent.
class FuzzEnv {
 public:
  enum class Mode { kSync, kAsync };

  struct StepResult {
    Observation obs;
    double reward = 0;
    bool done = false;
  };

  FuzzEnv(EnvConfig config, Mode mode);
  ~FuzzEnv();

  FuzzEnv(const FuzzEnv&) = delete;
  FuzzEnv& operator=(const FuzzEnv&) = delete;

  // Starts episode number episode_index()+1 with engine seed
  // seed + 1000003 * episode_index. The persistent dictionary carries
  // over; everything else is fresh. Returns the encoding of the seed
  // corpus entry.
  Observation Reset();

  // Writes the action into the ring, waits for the next snapshot, and
  // returns (observation, coverage delta since the previous Step, done).
  // Throws std::logic_error when the episode is over or not started.
  StepResult Step(MutatorAction action);

  bool episode_active() const { return active_; }
  int episodes_started() const { return episode_idx_; }
  const EnvConfig& config() const { return config_; }
  Engine* engine() { return engine_.get(); }

  // Valid after the episode finished (done observed or Close called).
  const RunReport& last_report() const;

  // Aborts a running episode and joins the engine thread.
  void Close();

  // Transfers engine ownership to the caller (after the episode ended),
  // e.g. to keep corpus and report alive past the env.
  std::unique_ptr<Engine> ReleaseEngine();

 private:
  void JoinEngineThread();

  EnvConfig config_;
  Mode mode_;
  std::unique_ptr<Engine> engine_;
  std::thread engine_thread_;
  std::deque<Word> carried_persist_;
  uint64_t last_cov_ = 0;
  int episode_idx_ = 0;
  bool active_ = false;
};

}  // namespace fuzzrl

#endif  // FUZZRL_ENV_HPP_
