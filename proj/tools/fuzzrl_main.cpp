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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fuzzrl/agent/agent.hpp"
#include "fuzzrl/bench.hpp"
#include "fuzzrl/engine.hpp"
#include "fuzzrl/env.hpp"
#include "fuzzrl/run_io.hpp"
#include "fuzzrl/targets.hpp"

namespace {

using namespace fuzzrl;

void AddEnvFlags(CLI::App* cmd, EnvConfig* cfg) {
  cmd->add_option("--target", cfg->target, "synthetic target name")
      ->capture_default_str();
  cmd->add_option("--budget-execs", cfg->budget_execs,
                  "per-run execution budget (0 = unbounded)")
      ->capture_default_str();
  cmd->add_option("--budget-secs", cfg->budget_secs,
                  "per-run wall-clock budget in seconds (0 = unbounded)")
      ->capture_default_str();
  cmd->add_option("--ring-k", cfg->ring_k, "action ring capacity")
      ->capture_default_str();
  cmd->add_option("--snapshot-s", cfg->snapshot_s,
                  "snapshot publication period (executions)")
      ->capture_default_str();
  cmd->add_option("--max-len", cfg->max_len, "maximum input length")
      ->capture_default_str();
  cmd->add_option("--seed", cfg->seed, "run seed")->capture_default_str();
}

int CmdFuzz(const EnvConfig& cfg, const std::string& policy_text,
            const std::string& out_flag, bool record_actions) {
  auto policy = PolicySpec::Parse(policy_text);
  if (!policy) {
    std::cerr << "error: bad --policy: " << policy_text << "\n";
    return 2;
  }
  auto engine = RunPolicyOnce(cfg, *policy, 0.05, record_actions);

  std::filesystem::path dir = RunDirFor(ResolveOutRoot(out_flag), cfg);
  std::string err;
  if (!WriteRunArtifacts(dir, cfg, *engine, policy->label, &err)) {
    std::cerr << "error: " << err << "\n";
    return 2;
  }
  std::cout << SummaryJson(cfg, engine->report(), policy->label);
  std::cerr << "run dir: " << dir.string() << "\n";
  return 0;
}

int CmdTrain(const EnvConfig& cfg, AgentConfig agent_cfg, int episodes,
             const std::string& out_flag) {
  std::filesystem::path dir = RunDirFor(ResolveOutRoot(out_flag), cfg);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "config.env", std::ios::trunc) << cfg.ToText();

  TrainSchedule sched;
  sched.episodes = episodes;
  sched.checkpoint_dir = dir.string();
  TrainResult result = TrainAgent(cfg, agent_cfg, sched);

  std::ofstream log(dir / "train_log.csv", std::ios::trunc);
  log << "episode,step,epsilon,loss,cov\n";
  for (const TrainLogRow& row : result.log) {
    log << row.episode << ',' << row.step << ',' << row.epsilon << ','
        << row.loss << ',' << row.cov << '\n';
  }
  for (size_t ep = 0; ep < result.episode_final_cov.size(); ++ep) {
    std::cout << "episode " << (ep + 1)
              << " final coverage: " << result.episode_final_cov[ep] << "\n";
  }
  for (const std::string& ckpt : result.checkpoint_files) {
    std::cout << "checkpoint: " << ckpt << "\n";
  }
  return 0;
}

int CmdBench(ExperimentPlan plan, const std::string& policies_text,
             const std::string& out_flag) {
  std::string rest = policies_text;
  while (!rest.empty()) {
    size_t comma = rest.find(',');
    std::string one = rest.substr(0, comma);
    rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    auto spec = PolicySpec::Parse(one);
    if (!spec) {
      std::cerr << "error: bad policy in --policies: " << one << "\n";
      return 2;
    }
    plan.policies.push_back(*spec);
  }
  ExperimentReport report = RunExperiment(plan);

  std::filesystem::path dir =
      RunDirFor(ResolveOutRoot(out_flag), plan.config);
  std::filesystem::create_directories(dir);
  EmitSeriesCsv(report, (dir / "series.csv").string(),
                (dir / "series_summary.csv").string());
  std::string summary = ExperimentSummaryJson(report);
  std::ofstream(dir / "summary.json", std::ios::trunc) << summary;
  std::cout << summary;
  std::cerr << "bench dir: " << dir.string() << "\n";
  return 0;
}

int CmdReplay(const std::string& run_dir) {
  std::filesystem::path dir(run_dir);
  std::string err;

  std::ifstream cf(dir / "config.env");
  if (!cf) {
    std::cerr << "error: cannot open " << (dir / "config.env").string()
              << "\n";
    return 2;
  }
  std::string text((std::istreambuf_iterator<char>(cf)),
                   std::istreambuf_iterator<char>());
  auto cfg = EnvConfig::FromText(text);
  if (!cfg) {
    std::cerr << "error: malformed config.env\n";
    return 2;
  }
  auto digest = ReadSummaryDigest(dir / "summary.json", &err);
  if (!digest) {
    std::cerr << "error: " << err << "\n";
    return 2;
  }
  if (digest->config_hash != cfg->Hash()) {
    std::cerr << "replay mismatch: config.env hash differs from summary\n";
    return 1;
  }

  PolicySpec spec;
  spec.kind = PolicySpec::Kind::kScripted;
  spec.path = (dir / "actions.bin").string();
  spec.label = "replay";
  auto engine = RunPolicyOnce(*cfg, spec, 0, false);
  const RunReport& rep = engine->report();

  if (rep.executions != digest->executions ||
      rep.final_coverage != digest->final_coverage ||
      rep.corpus_hash != digest->corpus_hash) {
    std::cerr << "replay mismatch: got cov=" << rep.final_coverage
              << " execs=" << rep.executions << std::hex << " corpus=0x"
              << rep.corpus_hash << std::dec
              << ", recorded cov=" << digest->final_coverage
              << " execs=" << digest->executions << std::hex << " corpus=0x"
              << digest->corpus_hash << std::dec << "\n";
    return 1;
  }
  std::cout << "replay ok: cov=" << rep.final_coverage
            << " execs=" << rep.executions << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzrl: coverage-guided fuzzing with a learned mutator policy"};
  app.require_subcommand(1);

  // fuzz
  EnvConfig fuzz_cfg;
  std::string fuzz_policy = "random";
  std::string fuzz_out;
  bool fuzz_record = false;
  CLI::App* fuzz = app.add_subcommand("fuzz", "run one fuzzing run");
  AddEnvFlags(fuzz, &fuzz_cfg);
  fuzz->add_option("--policy", fuzz_policy,
                   "random | trained:CKPT | scripted:LOG")
      ->capture_default_str();
  fuzz->add_option("--out", fuzz_out, "output root (default $FUZZRL_OUT_DIR "
                                      "or ./runs)");
  fuzz->add_flag("--record-actions", fuzz_record,
                 "write the per-execution action log (enables replay)");

  // train
  EnvConfig train_cfg;
  train_cfg.max_len = 512;  // keeps the 8*max_len observation affordable
  AgentConfig agent_cfg;
  int episodes = 3;
  std::string train_out;
  CLI::App* train = app.add_subcommand("train", "train the Double-Q agent");
  AddEnvFlags(train, &train_cfg);
  train->add_option("--episodes", episodes, "training episodes")
      ->capture_default_str();
  train->add_option("--gamma", agent_cfg.gamma, "discount factor")
      ->capture_default_str();
  train->add_option("--batch", agent_cfg.batch, "replay batch size")
      ->capture_default_str();
  train->add_option("--target-sync", agent_cfg.target_sync,
                    "target network refresh period (train steps)")
      ->capture_default_str();
  train->add_option("--alpha", agent_cfg.alpha, "priority exponent")
      ->capture_default_str();
  train->add_option("--lr", agent_cfg.lr, "learning rate")
      ->capture_default_str();
  train->add_option("--eps-min", agent_cfg.eps_min, "final epsilon")
      ->capture_default_str();
  train->add_option("--reward-clip", agent_cfg.reward_clip,
                    "reward clip bound (<=0 disables)")
      ->capture_default_str();
  train->add_option("--embed", agent_cfg.dims.embed, "embedding width")
      ->capture_default_str();
  train->add_option("--lstm-units", agent_cfg.dims.lstm, "recurrent units")
      ->capture_default_str();
  train->add_option("--agent-seed", agent_cfg.seed, "agent rng/init seed")
      ->capture_default_str();
  train->add_option("--out", train_out, "output root");

  // bench
  ExperimentPlan plan;
  std::string bench_policies = "random";
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "repeated-run experiment");
  AddEnvFlags(bench, &plan.config);
  bench->add_option("--policies", bench_policies,
                    "comma-separated policy specs (baseline first)")
      ->capture_default_str();
  bench->add_option("--repeats", plan.repeats, "runs per policy")
      ->capture_default_str();
  bench->add_option("--threshold", plan.threshold,
                    "plateau-breakthrough coverage threshold")
      ->capture_default_str();
  bench->add_option("--eval-epsilon", plan.eval_epsilon,
                    "exploration during trained-policy evaluation")
      ->capture_default_str();
  bench->add_option("--workers", plan.workers, "parallel run workers")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "output root");

  // replay
  std::string replay_dir;
  CLI::App* replay = app.add_subcommand(
      "replay", "re-execute a recorded run and verify its outcome");
  replay->add_option("--run-dir", replay_dir, "run directory to replay")
      ->required();

  // targets
  CLI::App* targets = app.add_subcommand("targets", "list synthetic targets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(fuzz)) {
      return CmdFuzz(fuzz_cfg, fuzz_policy, fuzz_out, fuzz_record);
    }
    if (app.got_subcommand(train)) {
      return CmdTrain(train_cfg, agent_cfg, episodes, train_out);
    }
    if (app.got_subcommand(bench)) {
      return CmdBench(plan, bench_policies, bench_out);
    }
    if (app.got_subcommand(replay)) {
      return CmdReplay(replay_dir);
    }
    if (app.got_subcommand(targets)) {
      for (const std::string& name : TargetNames()) {
        std::cout << name << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
