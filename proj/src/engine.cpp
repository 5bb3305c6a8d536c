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

#include "fuzzrl/engine.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fuzzrl {

namespace {

uint64_t NowNs() {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

}  // namespace

bool RunConfig::Valid(std::string* why) const {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (max_len == 0) return fail("max_len must be positive");
  if (ring_k == 0) return fail("ring_k must be positive");
  if (snapshot_s == 0) return fail("snapshot_s must be positive");
  if (budget_execs == 0 && budget_secs <= 0) {
    return fail("one of budget_execs/budget_secs must be positive");
  }
  if (action_source == ActionSource::kScript && script.empty()) {
    return fail("scripted action source needs a non-empty script");
  }
  return true;
}

Engine::Engine(TargetProgram target, RunConfig config, uint64_t seed)
    : target_(std::move(target)),
      config_(std::move(config)),
      rng_(seed),
      action_rng_(seed ^ 0xAC7104DEC15105ULL),
      dicts_(config_.dict_limits) {
  std::string why;
  if (!config_.Valid(&why)) {
    throw std::invalid_argument("invalid engine config: " + why);
  }
  ring_ = std::make_unique<ActionRing>(config_.ring_k, rng_);

  // Seed corpus: one input of the target's seed length (default a single
  // byte), random content.
  CorpusEntry seed_entry;
  size_t n = std::max<size_t>(1, std::min(target_.seed_input_len,
                                          config_.max_len));
  seed_entry.input.bytes.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    seed_entry.input.bytes.push_back(
        static_cast<uint8_t>(rng_.NextU64() & 0xFF));
  }
  corpus_.push_back(std::move(seed_entry));
  last_input_ = corpus_[0].input;

  report_.seed = seed;
  report_.config_hash = config_.config_hash;
  start_ns_ = NowNs();
}

uint64_t Engine::ElapsedNs() const { return NowNs() - start_ns_; }

StepOutcome Engine::FuzzOnce() {
  MutatorAction action;
  switch (config_.action_source) {
    case ActionSource::kRing:
      action = ring_->ReadNext();
      break;
    case ActionSource::kUniform:
      action = ActionFromIndex(
          static_cast<uint8_t>(action_rng_.Below(kNumActions)));
      break;
    case ActionSource::kScript:
      action = ActionFromIndex(
          config_.script[step_ % config_.script.size()]);
      break;
  }

  size_t pick = rng_.Below(corpus_.size());
  const TestInput& base = corpus_[pick].input;
  const TestInput* cross = nullptr;
  if (action == MutatorAction::kCrossOver) {
    cross = &corpus_[rng_.Below(corpus_.size())].input;
  }

  MutatorLimits limits{config_.max_len, 128};
  MutationResult mut = Mutate(action, base, cross, dicts_, rng_, limits);

  ExecutionFeedback fb = target_.execute(mut.output);
  for (const TorcEvent& ev : fb.torc_events) {
    dicts_.RecordCompare(ev.observed, ev.expected);
  }
  size_t new_edges = coverage_.Absorb(fb);

  ++step_;
  report_.action_selected[ActionIndex(action)]++;
  if (config_.record_actions) {
    report_.actions.push_back(ActionIndex(action));
  }

  if (new_edges > 0) {
    report_.action_credited[ActionIndex(mut.applied)]++;
    if (mut.credit_word) dicts_.CreditWord(*mut.credit_word);
    CorpusEntry e;
    e.input = mut.output;
    e.discovery_step = step_;
    e.credited = mut.applied;
    e.cov_after = coverage_.count();
    corpus_.push_back(std::move(e));
  }

  if (fb.verdict == Verdict::kCrash) {
    ++report_.crashes;
    if (!config_.crash_dir.empty()) {
      std::filesystem::create_directories(config_.crash_dir);
      char name[64];
      std::snprintf(name, sizeof(name), "crash-%08llu-%08llx.bin",
                    static_cast<unsigned long long>(step_),
                    static_cast<unsigned long long>(
                        Fnv1a64(mut.output.view()) & 0xFFFFFFFFULL));
      std::ofstream f(std::filesystem::path(config_.crash_dir) / name,
                      std::ios::binary);
      f.write(reinterpret_cast<const char*>(mut.output.bytes.data()),
              static_cast<std::streamsize>(mut.output.size()));
    }
  }

  last_input_ = std::move(mut.output);

  bool snapshot_due = (step_ % config_.snapshot_s) == 0;
  if (new_edges > 0 || snapshot_due) {
    AppendSeriesRow(action, static_cast<uint32_t>(new_edges));
  }
  if (snapshot_due) PublishSnapshot(false);

  return StepOutcome{action, mut.applied, new_edges, coverage_.count()};
}

bool Engine::BudgetExhausted() const {
  if (config_.budget_execs > 0 && step_ >= config_.budget_execs) return true;
  if (config_.budget_secs > 0 &&
      static_cast<double>(ElapsedNs()) * 1e-9 >= config_.budget_secs) {
    return true;
  }
  return false;
}

const RunReport& Engine::Run() {
  while (!BudgetExhausted() && !stopped()) FuzzOnce();
  Finish();
  return report_;
}

void Engine::Finish() {
  if (finished_) return;
  finished_ = true;
  report_.executions = step_;
  report_.final_coverage = coverage_.count();
  report_.corpus_entries = corpus_.size();
  report_.corpus_hash = CorpusHash(corpus_);
  report_.wall_secs = static_cast<double>(ElapsedNs()) * 1e-9;
  if (report_.series.empty() || report_.series.back().step != step_) {
    AppendSeriesRow(static_cast<MutatorAction>(0), 0);  // closing marker
  }
  PublishSnapshot(true);
}

void Engine::PublishSnapshot(bool final_snapshot) {
  Snapshot s;
  s.last_input = last_input_;
  s.cov = coverage_.count();
  s.step = step_;
  s.wallclock_ns = ElapsedNs();
  s.final_snapshot = final_snapshot;
  cell_.Publish(std::move(s));
}

void Engine::AppendSeriesRow(MutatorAction action, uint32_t new_edges) {
  SeriesRow row;
  row.step = step_;
  row.wallclock_ns = ElapsedNs();
  row.cov = coverage_.count();
  row.action = ActionIndex(action);
  row.new_edges = new_edges;
  report_.series.push_back(row);
}

uint64_t Engine::CorpusHash(const std::vector<CorpusEntry>& corpus) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (const CorpusEntry& e : corpus) {
    uint64_t len = e.input.size();
    uint8_t len_bytes[8];
    for (int i = 0; i < 8; ++i) {
      len_bytes[i] = static_cast<uint8_t>((len >> (8 * i)) & 0xFF);
    }
    h = Fnv1a64(std::span<const uint8_t>(len_bytes, 8), h);
    h = Fnv1a64(e.input.view(), h);
  }
  return h;
}

}  // namespace fuzzrl
