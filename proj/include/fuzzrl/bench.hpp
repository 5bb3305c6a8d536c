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

#ifndef FUZZRL_BENCH_HPP_
#define FUZZRL_BENCH_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuzzrl/engine.hpp"
#include "fuzzrl/env.hpp"
#include "fuzzrl/mutators.hpp"

namespace fuzzrl {

// A policy under comparison: "random", "trained:<checkpoint>", or
// "scripted:<action log>".
struct PolicySpec {
  enum class Kind : uint8_t { kRandom, kTrained, kScripted };
  Kind kind = Kind::kRandom;
  std::string path;
  std::string label = "random";

  static std::optional<PolicySpec> Parse(const std::string& text);
};

struct ExperimentPlan {
  EnvConfig config;  // per-run budget/target; seed is the base seed
  std::vector<PolicySpec> policies;
  int repeats = 25;
  uint64_t threshold = 0;   // breakthrough coverage threshold
  double eval_epsilon = 0.05;
  int workers = 1;
};

struct RunStat {
  uint64_t seed = 0;
  uint64_t final_cov = 0;
  uint64_t executions = 0;
  uint64_t corpus_hash = 0;
  std::array<uint64_t, kNumActions> action_selected{};
  std::vector<std::pair<uint64_t, uint64_t>> series;  // (step, cov)
};

struct MeanCi {
  double mean = 0;
  double sd = 0;
  double half = 0;  // 1.96 * sd / sqrt(n)
};
MeanCi MeanConfidence(const std::vector<double>& xs);

struct PolicyGroup {
  PolicySpec spec;
  std::vector<RunStat> runs;
  uint64_t best = 0;
  MeanCi final_cov_ci;
  double breakthrough_rate = 0;
  std::array<uint64_t, kNumActions> action_selected_total{};
  std::map<uint64_t, int> final_cov_histogram;
};

struct ExperimentReport {
  ExperimentPlan plan;
  std::vector<PolicyGroup> groups;
};

// Fraction of runs whose final coverage strictly exceeds threshold.
double BreakthroughRate(const std::vector<RunStat>& runs, uint64_t threshold);

// One-sided two-proportion z test, H1: p_treat > p_base. Degenerate
// pooled rates (0 or 1) give z = 0, p = 0.5.
struct PropTestResult {
  double z = 0;
  double p_one_sided = 0.5;
};
PropTestResult OneSidedProportionTest(size_t succ_treat, size_t n_treat,
                                      size_t succ_base, size_t n_base);

// Each group's runs use seeds base_seed + group*7919 + run, identical
// budgets across groups (asserted in the report). Deterministic for a
// fixed plan regardless of workers.
ExperimentReport RunExperiment(const ExperimentPlan& plan);

// One policy run; exposed for tests and the fuzz CLI command. The engine
// holds the report, corpus and dictionaries afterwards.
std::unique_ptr<Engine> RunPolicyOnce(const EnvConfig& config,
                                      const PolicySpec& policy,
                                      double eval_epsilon,
                                      bool record_actions);

// Long-format per-run series (policy,run,step,cov) and a per-policy
// mean +- CI summary over a common step grid.
void EmitSeriesCsv(const ExperimentReport& report, const std::string& path,
                   const std::string& summary_path);
std::string ExperimentSummaryJson(const ExperimentReport& report);

}  // namespace fuzzrl

#endif  // FUZZRL_BENCH_HPP_
