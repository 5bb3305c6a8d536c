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

#include "fuzzrl/env.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "fuzzrl/targets.hpp"

namespace fuzzrl {

Observation EncodeObservation(const TestInput& input, size_t max_len) {
  Observation obs;
  obs.bits.assign(8 * max_len, 0);
  obs.input_len = input.size();
  for (size_t j = 0; j < input.size(); ++j) {
    uint8_t b = input.bytes[j];
    for (int k = 0; k < 8; ++k) {
      obs.bits[8 * j + static_cast<size_t>(k)] =
          static_cast<uint8_t>((b >> (7 - k)) & 1);  // MSB first
    }
  }
  return obs;
}

std::vector<uint8_t> DecodeObservationBits(const std::vector<uint8_t>& bits,
                                           size_t input_len) {
  std::vector<uint8_t> out(input_len, 0);
  for (size_t j = 0; j < input_len; ++j) {
    uint8_t b = 0;
    for (int k = 0; k < 8; ++k) {
      b = static_cast<uint8_t>((b << 1) | (bits[8 * j + static_cast<size_t>(k)] & 1));
    }
    out[j] = b;
  }
  return out;
}

std::string EnvConfig::ToText() const {
  char buf[512];
  char secs[64];
  std::snprintf(secs, sizeof(secs), "%.17g", budget_secs);
  std::snprintf(buf, sizeof(buf),
                "target=%s\n"
                "budget_execs=%" PRIu64 "\n"
                "budget_secs=%s\n"
                "ring_k=%zu\n"
                "snapshot_s=%zu\n"
                "max_len=%zu\n"
                "seed=%" PRIu64 "\n"
                "version=%s\n",
                target.c_str(), budget_execs, secs, ring_k, snapshot_s,
                max_len, seed, version.c_str());
  return buf;
}

std::optional<EnvConfig> EnvConfig::FromText(std::string_view text) {
  EnvConfig cfg;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    std::string key(line.substr(0, eq));
    std::string val(line.substr(eq + 1));
    char* end = nullptr;
    if (key == "target") {
      cfg.target = val;
    } else if (key == "budget_execs") {
      cfg.budget_execs = std::strtoull(val.c_str(), &end, 10);
      if (end == val.c_str()) return std::nullopt;
    } else if (key == "budget_secs") {
      cfg.budget_secs = std::strtod(val.c_str(), &end);
      if (end == val.c_str()) return std::nullopt;
    } else if (key == "ring_k") {
      cfg.ring_k = std::strtoull(val.c_str(), &end, 10);
    } else if (key == "snapshot_s") {
      cfg.snapshot_s = std::strtoull(val.c_str(), &end, 10);
    } else if (key == "max_len") {
      cfg.max_len = std::strtoull(val.c_str(), &end, 10);
    } else if (key == "seed") {
      cfg.seed = std::strtoull(val.c_str(), &end, 10);
    } else if (key == "version") {
      cfg.version = val;
    } else {
      return std::nullopt;  // unknown key: refuse silently-skewed configs
    }
  }
  return cfg;
}

uint64_t EnvConfig::Hash() const { return Fnv1a64(ToText()); }

RunConfig EnvConfig::ToRunConfig() const {
  RunConfig rc;
  rc.max_len = max_len;
  rc.ring_k = ring_k;
  rc.snapshot_s = snapshot_s;
  rc.budget_execs = budget_execs;
  rc.budget_secs = budget_secs;
  rc.config_hash = Hash();
  return rc;
}

FuzzEnv::FuzzEnv(EnvConfig config, Mode mode)
    : config_(std::move(config)), mode_(mode) {}

FuzzEnv::~FuzzEnv() { Close(); }

void FuzzEnv::JoinEngineThread() {
  if (engine_thread_.joinable()) engine_thread_.join();
}

void FuzzEnv::Close() {
  if (engine_) engine_->Stop();
  JoinEngineThread();
  active_ = false;
}

Observation FuzzEnv::Reset() {
  Close();
  if (engine_) {
    // Harvest the persistent dictionary before dropping the episode.
    carried_persist_ = engine_->dicts().persist();
  }
  auto target = TargetByName(config_.target);
  if (!target) {
    throw std::invalid_argument("unknown target: " + config_.target);
  }
  uint64_t episode_seed =
      config_.seed + 1000003ULL * static_cast<uint64_t>(episode_idx_);
  engine_ = std::make_unique<Engine>(std::move(*target), config_.ToRunConfig(),
                                     episode_seed);
  engine_->dicts().PreloadPersist(carried_persist_);
  ++episode_idx_;
  last_cov_ = 0;
  active_ = true;
  if (mode_ == Mode::kAsync) {
    engine_thread_ = std::thread([e = engine_.get()] { e->Run(); });
  }
  Observation obs = EncodeObservation(engine_->corpus()[0].input,
                                      config_.max_len);
  obs.cov = 0;
  obs.step = 0;
  return obs;
}

FuzzEnv::StepResult FuzzEnv::Step(MutatorAction action) {
  if (!active_) throw std::logic_error("Step on an inactive episode");
  engine_->ring().Write(action);

  Snapshot snap;
  if (mode_ == Mode::kSync) {
    while (!engine_->snapshot_cell().Consume(&snap)) {
      if (engine_->BudgetExhausted()) break;
      engine_->FuzzOnce();
    }
    if (engine_->BudgetExhausted()) {
      engine_->Finish();
      Snapshot fin;
      if (engine_->snapshot_cell().Consume(&fin)) snap = fin;
    }
  } else {
    while (!engine_->snapshot_cell().Consume(&snap)) {
      std::this_thread::yield();
    }
  }

  StepResult r;
  r.obs = EncodeObservation(snap.last_input, config_.max_len);
  r.obs.cov = snap.cov;
  r.obs.step = snap.step;
  r.reward = static_cast<double>(snap.cov) - static_cast<double>(last_cov_);
  last_cov_ = snap.cov;
  r.done = snap.final_snapshot;
  if (r.done) {
    active_ = false;
    JoinEngineThread();
  }
  return r;
}

const RunReport& FuzzEnv::last_report() const {
  if (!engine_) throw std::logic_error("no episode has run");
  return engine_->report();
}

std::unique_ptr<Engine> FuzzEnv::ReleaseEngine() {
  Close();
  return std::move(engine_);
}

}  // namespace fuzzrl
