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

#include "fuzzrl/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "fuzzrl/agent/agent.hpp"
#include "fuzzrl/run_io.hpp"
#include "fuzzrl/targets.hpp"

namespace fuzzrl {

std::optional<PolicySpec> PolicySpec::Parse(const std::string& text) {
  PolicySpec s;
  s.label = text;
  if (text == "random") {
    s.kind = Kind::kRandom;
    return s;
  }
  if (text.rfind("trained:", 0) == 0) {
    s.kind = Kind::kTrained;
    s.path = text.substr(8);
    if (s.path.empty()) return std::nullopt;
    return s;
  }
  if (text.rfind("scripted:", 0) == 0) {
    s.kind = Kind::kScripted;
    s.path = text.substr(9);
    if (s.path.empty()) return std::nullopt;
    return s;
  }
  return std::nullopt;
}

MeanCi MeanConfidence(const std::vector<double>& xs) {
  MeanCi r;
  size_t n = xs.size();
  if (n == 0) return r;
  double sum = 0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  r.half = 1.96 * r.sd / std::sqrt(static_cast<double>(n));
  return r;
}

double BreakthroughRate(const std::vector<RunStat>& runs, uint64_t threshold) {
  if (runs.empty()) return 0;
  size_t above = 0;
  for (const RunStat& r : runs) {
    if (r.final_cov > threshold) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(runs.size());
}

PropTestResult OneSidedProportionTest(size_t succ_treat, size_t n_treat,
                                      size_t succ_base, size_t n_base) {
  PropTestResult r;
  if (n_treat == 0 || n_base == 0) return r;
  double pt = static_cast<double>(succ_treat) / static_cast<double>(n_treat);
  double pb = static_cast<double>(succ_base) / static_cast<double>(n_base);
  double pooled = static_cast<double>(succ_treat + succ_base) /
                  static_cast<double>(n_treat + n_base);
  double var = pooled * (1 - pooled) *
               (1.0 / static_cast<double>(n_treat) +
                1.0 / static_cast<double>(n_base));
  if (var <= 0) return r;  // both groups all-success or all-failure
  r.z = (pt - pb) / std::sqrt(var);
  r.p_one_sided = 0.5 * std::erfc(r.z / std::sqrt(2.0));  // 1 - Phi(z)
  return r;
}

std::unique_ptr<Engine> RunPolicyOnce(const EnvConfig& config,
                                      const PolicySpec& policy,
                                      double eval_epsilon,
                                      bool record_actions) {
  auto target = TargetByName(config.target);
  if (!target) {
    throw std::runtime_error("unknown target: " + config.target);
  }

  if (policy.kind == PolicySpec::Kind::kRandom ||
      policy.kind == PolicySpec::Kind::kScripted) {
    RunConfig rc = config.ToRunConfig();
    rc.record_actions = record_actions;
    if (policy.kind == PolicySpec::Kind::kRandom) {
      rc.action_source = ActionSource::kUniform;
    } else {
      rc.action_source = ActionSource::kScript;
      std::string err;
      auto script = ReadActionLog(policy.path, &err);
      if (!script) throw std::runtime_error(err);
      rc.script = std::move(*script);
    }
    auto engine = std::make_unique<Engine>(std::move(*target), rc,
                                           config.seed);
    engine->Run();
    return engine;
  }

  // Trained policy: greedy agent (eval_epsilon exploration), no learning.
  std::string err;
  auto params = LoadCheckpoint(policy.path, &err);
  if (!params) throw std::runtime_error(err);
  if (params->dims.obs_bits != 8 * config.max_len) {
    throw std::runtime_error(
        "checkpoint obs width does not match config max_len");
  }

  AgentConfig ac;
  ac.dims = params->dims;
  ac.replay_capacity = 1;  // unused during evaluation
  ac.seed = config.seed;
  DoubleQAgent agent(ac);
  agent.SetParams(*params);

  // The env owns the engine; keep the engine alive past episode end by
  // stealing it before the env is destroyed.
  FuzzEnv env(config, FuzzEnv::Mode::kSync);
  Observation obs = env.Reset();
  agent.ResetEpisode();
  // Per-execution actions come off the ring, so recording happens in the
  // engine regardless of policy kind.
  env.engine()->set_record_actions(record_actions);
  bool done = false;
  while (!done) {
    uint8_t a = agent.SelectAction(obs, eval_epsilon);
    FuzzEnv::StepResult sr = env.Step(static_cast<MutatorAction>(a));
    done = sr.done;
    obs = std::move(sr.obs);
  }
  return env.ReleaseEngine();
}

namespace {

RunStat StatFromEngine(const Engine& engine, uint64_t seed) {
  RunStat st;
  const RunReport& rep = engine.report();
  st.seed = seed;
  st.final_cov = rep.final_coverage;
  st.executions = rep.executions;
  st.corpus_hash = rep.corpus_hash;
  st.action_selected = rep.action_selected;
  st.series.reserve(rep.series.size());
  for (const SeriesRow& row : rep.series) {
    st.series.emplace_back(row.step, row.cov);
  }
  return st;
}

}  // namespace

ExperimentReport RunExperiment(const ExperimentPlan& plan) {
  if (plan.repeats <= 0) throw std::invalid_argument("repeats must be > 0");
  if (plan.policies.empty()) {
    throw std::invalid_argument("no policies to compare");
  }
  if (plan.config.budget_execs == 0) {
    throw std::invalid_argument(
        "experiments need an execution budget (matched across policies)");
  }

  ExperimentReport report;
  report.plan = plan;
  report.groups.resize(plan.policies.size());

  struct Job {
    size_t group;
    int run;
  };
  std::vector<Job> jobs;
  for (size_t g = 0; g < plan.policies.size(); ++g) {
    report.groups[g].spec = plan.policies[g];
    report.groups[g].runs.resize(static_cast<size_t>(plan.repeats));
    for (int r = 0; r < plan.repeats; ++r) jobs.push_back(Job{g, r});
  }

  auto run_job = [&](const Job& job) {
    EnvConfig cfg = plan.config;
    cfg.seed = plan.config.seed + 7919ULL * job.group +
               static_cast<uint64_t>(job.run);
    auto engine = RunPolicyOnce(cfg, plan.policies[job.group],
                                plan.eval_epsilon, false);
    report.groups[job.group].runs[static_cast<size_t>(job.run)] =
        StatFromEngine(*engine, cfg.seed);
  };

  if (plan.workers <= 1) {
    for (const Job& job : jobs) run_job(job);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        run_job(jobs[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < plan.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (PolicyGroup& group : report.groups) {
    std::vector<double> finals;
    for (const RunStat& r : group.runs) {
      finals.push_back(static_cast<double>(r.final_cov));
      group.best = std::max(group.best, r.final_cov);
      group.final_cov_histogram[r.final_cov]++;
      for (size_t a = 0; a < kNumActions; ++a) {
        group.action_selected_total[a] += r.action_selected[a];
      }
    }
    group.final_cov_ci = MeanConfidence(finals);
    group.breakthrough_rate = BreakthroughRate(group.runs, plan.threshold);

    // Budget fairness across groups.
    for (const RunStat& r : group.runs) {
      if (r.executions != group.runs[0].executions ||
          r.executions != report.groups[0].runs[0].executions) {
        throw std::logic_error("unequal execution budgets across runs");
      }
    }
  }
  return report;
}

void EmitSeriesCsv(const ExperimentReport& report, const std::string& path,
                   const std::string& summary_path) {
  std::ofstream f(path, std::ios::trunc);
  f << "policy,run,step,cov\n";
  for (const PolicyGroup& g : report.groups) {
    for (size_t r = 0; r < g.runs.size(); ++r) {
      for (const auto& [step, cov] : g.runs[r].series) {
        f << g.spec.label << ',' << r << ',' << step << ',' << cov << '\n';
      }
    }
  }

  // Common grid: snapshot_s multiples up to the budget, plus the end.
  std::vector<uint64_t> grid;
  uint64_t budget = report.plan.config.budget_execs;
  uint64_t stride = report.plan.config.snapshot_s;
  if (stride == 0) stride = 1;
  for (uint64_t s = stride; s < budget; s += stride) grid.push_back(s);
  grid.push_back(budget);

  std::ofstream fs(summary_path, std::ios::trunc);
  fs << "policy,step,mean,ci_lo,ci_hi\n";
  for (const PolicyGroup& g : report.groups) {
    for (uint64_t gs : grid) {
      std::vector<double> at;
      for (const RunStat& r : g.runs) {
        uint64_t cov = 0;
        for (const auto& [step, c] : r.series) {
          if (step <= gs) cov = c;
          else break;
        }
        at.push_back(static_cast<double>(cov));
      }
      MeanCi ci = MeanConfidence(at);
      fs << g.spec.label << ',' << gs << ',' << ci.mean << ','
         << ci.mean - ci.half << ',' << ci.mean + ci.half << '\n';
    }
  }
}

std::string ExperimentSummaryJson(const ExperimentReport& report) {
  nlohmann::json j;
  j["target"] = report.plan.config.target;
  j["repeats"] = report.plan.repeats;
  j["budget_execs"] = report.plan.config.budget_execs;
  j["threshold"] = report.plan.threshold;
  j["base_seed"] = report.plan.config.seed;
  j["groups"] = nlohmann::json::array();
  for (const PolicyGroup& g : report.groups) {
    nlohmann::json jg;
    jg["policy"] = g.spec.label;
    jg["best"] = g.best;
    jg["mean"] = g.final_cov_ci.mean;
    jg["sd"] = g.final_cov_ci.sd;
    jg["ci_half"] = g.final_cov_ci.half;
    jg["breakthrough_rate"] = g.breakthrough_rate;
    jg["action_selected_total"] = g.action_selected_total;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [cov, count] : g.final_cov_histogram) {
      hist[std::to_string(cov)] = count;
    }
    jg["final_cov_histogram"] = hist;
    nlohmann::json runs = nlohmann::json::array();
    for (const RunStat& r : g.runs) {
      runs.push_back({{"seed", r.seed},
                      {"final_cov", r.final_cov},
                      {"executions", r.executions}});
    }
    jg["runs"] = runs;
    j["groups"].push_back(jg);
  }
  if (report.groups.size() >= 2) {
    const PolicyGroup& base = report.groups[0];
    const PolicyGroup& treat = report.groups[1];
    auto above = [&](const PolicyGroup& g) {
      size_t n = 0;
      for (const RunStat& r : g.runs) {
        if (r.final_cov > report.plan.threshold) ++n;
      }
      return n;
    };
    PropTestResult t = OneSidedProportionTest(above(treat), treat.runs.size(),
                                              above(base), base.runs.size());
    j["proportion_test"] = {{"treatment", treat.spec.label},
                            {"baseline", base.spec.label},
                            {"z", t.z},
                            {"p_one_sided", t.p_one_sided}};
  }
  return j.dump(2) + "\n";
}

}  // namespace fuzzrl
