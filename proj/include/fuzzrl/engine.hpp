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

#ifndef FUZZRL_ENGINE_HPP_
#define FUZZRL_ENGINE_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "fuzzrl/coverage.hpp"
#include "fuzzrl/mutators.hpp"
#include "fuzzrl/ring.hpp"
#include "fuzzrl/rng.hpp"
#include "fuzzrl/targets.hpp"
#include "fuzzrl/test_input.hpp"

namespace fuzzrl {

// Where the engine takes its next mutation action from.
enum class ActionSource : uint8_t {
  kRing = 0,     // the agent-fed circular buffer (normal operation)
  kUniform = 1,  // hard-wired uniform-random policy (throughput baseline)
  kScript = 2,   // fixed per-execution sequence (replay, determinism tests)
};

struct RunConfig {
  size_t max_len = 4096;
  size_t ring_k = 32;
  size_t snapshot_s = 256;
  uint64_t budget_execs = 200000;  // 0 = unbounded
  double budget_secs = 0;          // 0 = unbounded
  DictionaryLimits dict_limits;
  ActionSource action_source = ActionSource::kRing;
  std::vector<uint8_t> script;  // per-execution actions for kScript
  bool record_actions = false;  // keep the full (step, action) trace
  std::string crash_dir;        // empty: crashing inputs not persisted
  uint64_t config_hash = 0;     // echoed into the report

  bool Valid(std::string* why) const;
};

struct CorpusEntry {
  TestInput input;
  uint64_t discovery_step = 0;  // 0 for the seed entry
  MutatorAction credited = MutatorAction::kInsertByte;
  uint64_t cov_after = 0;  // coverage count right after absorption
};

// One CSV row: written on every coverage gain, every snapshot period,
// and at run end.
struct SeriesRow {
  uint64_t step = 0;
  uint64_t wallclock_ns = 0;
  uint64_t cov = 0;
  uint8_t action = 0;
  uint32_t new_edges = 0;
};

struct StepOutcome {
  MutatorAction selected;  // what the action source supplied
  MutatorAction applied;   // after fallback substitution
  size_t new_edges = 0;
  uint64_t cov = 0;
};

struct RunReport {
  uint64_t executions = 0;
  uint64_t final_coverage = 0;
  uint64_t crashes = 0;
  uint64_t corpus_entries = 0;
  uint64_t corpus_hash = 0;  // order-sensitive digest of all entries
  uint64_t config_hash = 0;
  uint64_t seed = 0;
  double wall_secs = 0;
  std::array<uint64_t, kNumActions> action_selected{};
  std::array<uint64_t, kNumActions> action_credited{};
  std::vector<SeriesRow> series;
  std::vector<uint8_t> actions;  // per-execution trace when recorded
};

// The fuzzing loop: seed selection, ring-driven mutation, execution,
// corpus and dictionary updates. Owns Corpus, CoverageMap,
// DictionaryState and the target; sole reader of the ActionRing and sole
// writer of the SnapshotCell.
class Engine {
 public:
  Engine(TargetProgram target, RunConfig config, uint64_t seed);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  StepOutcome FuzzOnce();

  // Loops FuzzOnce until the budget is exhausted or Stop() is called,
  // then finalizes. Returns the report.
  const RunReport& Run();

  bool BudgetExhausted() const;

  // Publishes the final snapshot and completes the report. Idempotent.
  void Finish();

  // Cross-thread stop request (async mode teardown).
  void Stop() { stop_.store(true, std::memory_order_relaxed); }
  bool stopped() const { return stop_.load(std::memory_order_relaxed); }

  ActionRing& ring() { return *ring_; }
  SnapshotCell& snapshot_cell() { return cell_; }

  const std::vector<CorpusEntry>& corpus() const { return corpus_; }
  const CoverageMap& coverage() const { return coverage_; }
  DictionaryState& dicts() { return dicts_; }
  const DictionaryState& dicts() const { return dicts_; }
  const RunReport& report() const { return report_; }
  uint64_t step() const { return step_; }
  const RunConfig& config() const { return config_; }
  // Only meaningful before the first execution.
  void set_record_actions(bool on) { config_.record_actions = on; }

  // Order-sensitive FNV digest over entry contents.
  static uint64_t CorpusHash(const std::vector<CorpusEntry>& corpus);

 private:
  void PublishSnapshot(bool final_snapshot);
  void AppendSeriesRow(MutatorAction action, uint32_t new_edges);
  uint64_t ElapsedNs() const;

  TargetProgram target_;
  RunConfig config_;
  RngStream rng_;
  // Uniform action draws live on their own stream so that a scripted
  // replay of a recorded run consumes the mutation stream identically.
  RngStream action_rng_;
  std::unique_ptr<ActionRing> ring_;
  SnapshotCell cell_;
  std::vector<CorpusEntry> corpus_;
  CoverageMap coverage_;
  DictionaryState dicts_;
  TestInput last_input_;
  RunReport report_;
  uint64_t step_ = 0;
  uint64_t start_ns_ = 0;
  bool finished_ = false;
  std::atomic<bool> stop_{false};
};

}  // namespace fuzzrl

#endif  // FUZZRL_ENGINE_HPP_
