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

#ifndef FUZZRL_AGENT_AGENT_HPP_
#define FUZZRL_AGENT_AGENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzrl/agent/replay.hpp"
#include "fuzzrl/env.hpp"
#include "fuzzrl/nn/q_network.hpp"
#include "fuzzrl/rng.hpp"

namespace fuzzrl {

struct AgentConfig {
  QNetDims dims;
  Real gamma = 0.99;
  size_t batch = 32;
  size_t target_sync = 1000;  // tau: target refresh period, train steps
  Real alpha = 0.6;           // priority shaping exponent
  Real beta_start = 0.4;      // importance correction, annealed to beta_end
  Real beta_end = 1.0;
  Real eps_start = 1.0;  // annealed to eps_min over the first half
  Real eps_min = 0.05;
  Real lr = 1e-3;
  size_t replay_capacity = 50000;
  size_t learn_min = 64;  // replay size required before training starts
  Real reward_clip = 1.0;  // clip rewards to [0, clip]; <= 0 disables
  uint64_t seed = 7;
};

// Epsilon-greedy recurrent Q-learner with a Double-Q target and
// prioritized replay. Single-threaded; shares nothing.
class DoubleQAgent {
 public:
  explicit DoubleQAgent(const AgentConfig& config);

  // Zeroes the recurrent state (episode boundary).
  void ResetEpisode();

  // Forwards the online net (advancing the recurrent state), then picks
  // epsilon-greedily. Also latches the pending transition head: the
  // observation and the surrounding recurrent states.
  uint8_t SelectAction(const Observation& obs, Real epsilon);

  // Completes the pending transition and stores it with max priority.
  // Rewards are clipped per config before storage.
  void ObserveOutcome(uint8_t action, Real reward, const Observation& next_obs,
                      bool done);

  // One prioritized batch update against the Double-Q target. Returns the
  // mean weighted loss, or 0 when the replay is still warming up.
  Real TrainStep(Real beta);

  // Linear anneal from eps_start to eps_min over the first half of
  // total_steps, flat afterwards.
  Real EpsilonAt(size_t step, size_t total_steps) const;
  Real BetaAt(size_t step, size_t total_steps) const;

  const QNetParams& online() const { return online_; }
  const QNetParams& target() const { return target_; }
  void SetParams(const QNetParams& p);  // sets both online and target
  PrioritizedReplay& replay() { return replay_; }
  size_t train_steps() const { return train_steps_; }
  const AgentConfig& config() const { return config_; }
  RngStream& rng() { return rng_; }

 private:
  CompactObs Compact(const Observation& obs) const;

  AgentConfig config_;
  QNetParams online_;
  QNetParams target_;
  QNetParams grads_;  // reused batch gradient buffer
  PrioritizedReplay replay_;
  RngStream rng_;
  RecurrentState state_;
  RecurrentState pending_before_;
  RecurrentState pending_mid_;
  CompactObs pending_obs_;
  bool has_pending_ = false;
  size_t train_steps_ = 0;
};

// One line of the training log CSV.
struct TrainLogRow {
  int episode = 0;
  uint64_t step = 0;  // agent step within training
  Real epsilon = 0;
  Real loss = 0;
  uint64_t cov = 0;
};

struct TrainSchedule {
  int episodes = 3;
  std::string checkpoint_dir;  // empty: no checkpoint files
  FuzzEnv::Mode mode = FuzzEnv::Mode::kSync;
};

struct TrainResult {
  QNetParams final_params;
  std::vector<std::string> checkpoint_files;  // one per episode
  std::vector<uint64_t> episode_final_cov;
  std::vector<TrainLogRow> log;
};

// The episodic training loop: reset, act, step, store, train; one
// checkpoint per episode.
TrainResult TrainAgent(const EnvConfig& env_config, AgentConfig agent_config,
                       const TrainSchedule& schedule);

}  // namespace fuzzrl

#endif  // FUZZRL_AGENT_AGENT_HPP_
