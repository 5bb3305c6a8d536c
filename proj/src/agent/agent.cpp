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

#include "fuzzrl/agent/agent.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace fuzzrl {

DoubleQAgent::DoubleQAgent(const AgentConfig& config)
    : config_(config),
      online_(QNetParams::Init(config.dims, config.seed)),
      target_(online_),
      grads_(QNetParams::Zeros(config.dims)),
      replay_(config.replay_capacity, config.alpha),
      rng_(config.seed ^ 0x51EDA1C0FFEE5EEDULL),
      state_(RecurrentState::Zero(config.dims.lstm)) {}

void DoubleQAgent::ResetEpisode() {
  state_ = RecurrentState::Zero(config_.dims.lstm);
  has_pending_ = false;
}

CompactObs DoubleQAgent::Compact(const Observation& obs) const {
  CompactObs c;
  c.input = DecodeObservationBits(obs.bits, obs.input_len);
  c.cov = obs.cov;
  c.step = obs.step;
  return c;
}

uint8_t DoubleQAgent::SelectAction(const Observation& obs, Real epsilon) {
  if (obs.bits.size() != config_.dims.obs_bits) {
    throw std::invalid_argument("observation size mismatch");
  }
  pending_before_ = state_;
  std::vector<Real> q = QForward(online_, obs.bits.data(), &state_, nullptr);
  pending_mid_ = state_;
  pending_obs_ = Compact(obs);
  has_pending_ = true;

  if (rng_.Real01() < epsilon) {
    return static_cast<uint8_t>(rng_.Below(config_.dims.actions));
  }
  return static_cast<uint8_t>(ArgmaxLowest(q));
}

void DoubleQAgent::ObserveOutcome(uint8_t action, Real reward,
                                  const Observation& next_obs, bool done) {
  if (!has_pending_) {
    throw std::logic_error("ObserveOutcome without a SelectAction");
  }
  Transition t;
  t.obs = std::move(pending_obs_);
  t.next_obs = Compact(next_obs);
  t.action = action;
  t.reward = config_.reward_clip > 0
                 ? std::clamp(reward, Real(0), config_.reward_clip)
                 : reward;
  t.done = done;
  t.state_before = pending_before_;
  t.state_mid = pending_mid_;
  replay_.Add(std::move(t));
  has_pending_ = false;
}

Real DoubleQAgent::TrainStep(Real beta) {
  size_t need = std::max(config_.batch, config_.learn_min);
  if (replay_.size() < need) return 0;

  auto samples = replay_.SampleBatch(config_.batch, beta, rng_);

  for (auto* block : grads_.Blocks()) {
    std::fill(block->begin(), block->end(), Real(0));
  }

  Real loss = 0;
  std::vector<ForwardCache> caches(1);
  std::vector<std::vector<Real>> dq(1);
  for (const auto& s : samples) {
    Transition& t = replay_.Get(s.index);
    std::vector<uint8_t> bits =
        ExpandBits(t.obs.input, config_.dims.obs_bits);

    RecurrentState st = t.state_before;
    std::vector<Real> q = QForward(online_, bits.data(), &st, &caches[0]);

    Real y;
    if (t.done) {
      y = t.reward;
    } else {
      std::vector<uint8_t> next_bits =
          ExpandBits(t.next_obs.input, config_.dims.obs_bits);
      RecurrentState st_on = t.state_mid;
      std::vector<Real> q_on =
          QForward(online_, next_bits.data(), &st_on, nullptr);
      RecurrentState st_tg = t.state_mid;
      std::vector<Real> q_tg =
          QForward(target_, next_bits.data(), &st_tg, nullptr);
      y = DoubleQTargetFromValues(t.reward, false, config_.gamma, q_on, q_tg);
    }

    Real td = q[t.action] - y;
    loss += Real(0.5) * s.weight * td * td;

    dq[0].assign(config_.dims.actions, 0);
    dq[0][t.action] = s.weight * td;
    QBackwardSequence(online_, caches, dq, &grads_);

    replay_.UpdatePriority(s.index, std::abs(td) + 1e-3);
  }

  Real scale = config_.lr / static_cast<Real>(config_.batch);
  auto param_blocks = online_.Blocks();
  auto grad_blocks = grads_.Blocks();
  for (size_t b = 0; b < param_blocks.size(); ++b) {
    kern::SgdStep(param_blocks[b]->data(), grad_blocks[b]->data(), scale,
                  param_blocks[b]->size());
  }

  ++train_steps_;
  if (train_steps_ % config_.target_sync == 0) target_ = online_;

  return loss / static_cast<Real>(config_.batch);
}

Real DoubleQAgent::EpsilonAt(size_t step, size_t total_steps) const {
  size_t half = std::max<size_t>(1, total_steps / 2);
  if (step >= half) return config_.eps_min;
  Real frac = static_cast<Real>(step) / static_cast<Real>(half);
  return config_.eps_start + frac * (config_.eps_min - config_.eps_start);
}

Real DoubleQAgent::BetaAt(size_t step, size_t total_steps) const {
  size_t span = std::max<size_t>(1, total_steps);
  Real frac = std::min<Real>(1, static_cast<Real>(step) /
                                    static_cast<Real>(span));
  return config_.beta_start + frac * (config_.beta_end - config_.beta_start);
}

void DoubleQAgent::SetParams(const QNetParams& p) {
  if (!(p.dims == config_.dims)) {
    throw std::invalid_argument("checkpoint dims do not match agent config");
  }
  online_ = p;
  target_ = p;
}

TrainResult TrainAgent(const EnvConfig& env_config, AgentConfig agent_config,
                       const TrainSchedule& schedule) {
  agent_config.dims.obs_bits = 8 * env_config.max_len;
  DoubleQAgent agent(agent_config);
  FuzzEnv env(env_config, schedule.mode);

  TrainResult result;
  // Steps per episode is budget/snapshot_s give or take the budget edge;
  // the annealing horizon only needs the right scale.
  size_t est_steps_per_ep =
      env_config.budget_execs / std::max<size_t>(1, env_config.snapshot_s) + 2;
  size_t total_steps =
      est_steps_per_ep * static_cast<size_t>(std::max(1, schedule.episodes));

  size_t agent_step = 0;
  for (int ep = 0; ep < schedule.episodes; ++ep) {
    Observation obs = env.Reset();
    agent.ResetEpisode();
    bool done = false;
    uint64_t final_cov = 0;
    while (!done) {
      Real eps = agent.EpsilonAt(agent_step, total_steps);
      uint8_t a = agent.SelectAction(obs, eps);
      FuzzEnv::StepResult sr =
          env.Step(static_cast<MutatorAction>(a % kNumActions));
      agent.ObserveOutcome(a, sr.reward, sr.obs, sr.done);
      Real loss = agent.TrainStep(agent.BetaAt(agent_step, total_steps));
      ++agent_step;
      done = sr.done;
      final_cov = sr.obs.cov;
      result.log.push_back(TrainLogRow{ep, agent_step, eps, loss,
                                       sr.obs.cov});
      obs = std::move(sr.obs);
    }
    result.episode_final_cov.push_back(final_cov);

    if (!schedule.checkpoint_dir.empty()) {
      std::filesystem::create_directories(schedule.checkpoint_dir);
      char name[32];
      std::snprintf(name, sizeof(name), "ep_%03d.bin", ep + 1);
      std::string path =
          (std::filesystem::path(schedule.checkpoint_dir) / name).string();
      std::string err;
      if (!SaveCheckpoint(agent.online(), path, &err)) {
        throw std::runtime_error("checkpoint write failed: " + err);
      }
      result.checkpoint_files.push_back(path);
    }
  }
  result.final_params = agent.online();
  return result;
}

}  // namespace fuzzrl
