// Copyright 2026 The FuzzRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

fs::path WorkDir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "fuzzrl_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string Binary() {
  const char* bin = std::getenv("FUZZRL_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "FUZZRL_BIN must point at the fuzzrl tool");
  return bin;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CliResult RunCli(const std::string& args) {
  fs::path out = WorkDir() / "stdout.txt";
  fs::path err = WorkDir() / "stderr.txt";
  std::string cmd = Binary() + " " + args + " >" + out.string() + " 2>" +
                    err.string();
  int rc = std::system(cmd.c_str());
  CliResult r;
  if (rc != -1 && WIFEXITED(rc)) r.exit_code = WEXITSTATUS(rc);
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

// The one run directory under root (runs are named by config hash + seed).
fs::path SoleRunDir(const fs::path& root) {
  fs::path found;
  int count = 0;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) {
      found = entry.path();
      ++count;
    }
  }
  REQUIRE(count == 1);
  return found;
}

nlohmann::json SummaryWithoutWallTime(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  j.erase("wall_secs");
  return j;
}

const std::string kFuzzFlags =
    "--target magic_header --budget-execs 2000 --max-len 8 --ring-k 4 "
    "--snapshot-s 64 --seed 5";

}  // namespace

TEST_CASE("targets subcommand lists the synthetic corpus") {
  auto r = RunCli("targets");
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"magic_header", "magic_deep", "compare_gate", "bias_insert",
        "bias_change", "bias_erase", "crash_gate"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("fuzz writes a complete run directory and is deterministic") {
  fs::path root1 = WorkDir() / "fuzz1";
  fs::path root2 = WorkDir() / "fuzz2";

  auto r1 = RunCli("fuzz " + kFuzzFlags + " --record-actions --out " +
                   root1.string());
  REQUIRE(r1.exit_code == 0);

  fs::path dir = SoleRunDir(root1);
  CHECK(fs::exists(dir / "config.env"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "dict.hex"));
  CHECK(fs::exists(dir / "actions.bin"));
  CHECK(fs::is_directory(dir / "corpus"));
  CHECK_FALSE(fs::is_empty(dir / "corpus"));

  auto j = SummaryWithoutWallTime(r1.out);
  CHECK(j["target"] == "magic_header");
  CHECK(j["executions"] == 2000);
  CHECK(j["seed"] == 5);
  CHECK(j["action_selected"].size() == 13);

  // Same flags, same summary, bit for bit apart from wall time.
  auto r2 = RunCli("fuzz " + kFuzzFlags + " --record-actions --out " +
                   root2.string());
  REQUIRE(r2.exit_code == 0);
  CHECK(SummaryWithoutWallTime(r2.out) == j);
}

TEST_CASE("replay verifies a recorded run and detects tampering") {
  fs::path root = WorkDir() / "replay";
  auto r = RunCli("fuzz " + kFuzzFlags + " --record-actions --out " +
                  root.string());
  REQUIRE(r.exit_code == 0);
  fs::path dir = SoleRunDir(root);

  auto ok = RunCli("replay --run-dir " + dir.string());
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("replay ok") != std::string::npos);

  // Forge the recorded coverage: replay must fail with exit 1.
  fs::path summary = dir / "summary.json";
  auto j = nlohmann::json::parse(Slurp(summary));
  std::string original = j.dump(2) + "\n";
  j["final_coverage"] = j["final_coverage"].get<uint64_t>() + 1;
  std::ofstream(summary, std::ios::trunc) << j.dump(2) << "\n";
  auto bad = RunCli("replay --run-dir " + dir.string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("replay mismatch") != std::string::npos);
  std::ofstream(summary, std::ios::trunc) << original;

  // A config.env that no longer matches the summary hash also fails.
  fs::path cfg_file = dir / "config.env";
  std::string cfg_text = Slurp(cfg_file);
  size_t pos = cfg_text.find("seed=5");
  REQUIRE(pos != std::string::npos);
  std::string forged = cfg_text;
  forged.replace(pos, 6, "seed=6");
  std::ofstream(cfg_file, std::ios::trunc) << forged;
  auto mismatch = RunCli("replay --run-dir " + dir.string());
  CHECK(mismatch.exit_code == 1);
  std::ofstream(cfg_file, std::ios::trunc) << cfg_text;

  // Back to pristine state: replay passes again.
  CHECK(RunCli("replay --run-dir " + dir.string()).exit_code == 0);

  auto missing = RunCli("replay --run-dir /nonexistent_run_dir");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("config errors exit 2 with a one-line diagnostic") {
  auto bad_target = RunCli("fuzz --target no_such_target --budget-execs 100");
  CHECK(bad_target.exit_code == 2);
  CHECK(bad_target.err.find("error") != std::string::npos);

  auto bad_policy = RunCli("fuzz " + kFuzzFlags + " --policy nonsense");
  CHECK(bad_policy.exit_code == 2);

  auto missing_ckpt =
      RunCli("fuzz " + kFuzzFlags + " --policy trained:/no/such.bin");
  CHECK(missing_ckpt.exit_code == 2);

  auto no_subcommand = RunCli("");
  CHECK(no_subcommand.exit_code != 0);
}

TEST_CASE("train writes checkpoints and a training log") {
  fs::path root = WorkDir() / "train";
  auto r = RunCli(
      "train --target magic_header --budget-execs 300 --snapshot-s 32 "
      "--max-len 8 --ring-k 4 --seed 9 --episodes 2 --embed 4 "
      "--lstm-units 4 --out " +
      root.string());
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  CHECK(r.out.find("episode 1 final coverage:") != std::string::npos);
  CHECK(r.out.find("episode 2 final coverage:") != std::string::npos);

  fs::path dir = SoleRunDir(root);
  CHECK(fs::exists(dir / "ep_001.bin"));
  CHECK(fs::exists(dir / "ep_002.bin"));
  CHECK(fs::exists(dir / "config.env"));

  std::string log = Slurp(dir / "train_log.csv");
  CHECK(log.rfind("episode,step,epsilon,loss,cov", 0) == 0);
  CHECK(std::count(log.begin(), log.end(), '\n') > 2);
}

TEST_CASE("bench compares policies over repeated runs") {
  fs::path root = WorkDir() / "bench";
  auto r = RunCli(
      "bench --target magic_header --budget-execs 500 --max-len 8 "
      "--ring-k 4 --snapshot-s 64 --seed 7 --repeats 2 "
      "--policies random,random --threshold 9 --out " +
      root.string());
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);

  fs::path dir = SoleRunDir(root);
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "series_summary.csv"));
  CHECK(fs::exists(dir / "summary.json"));

  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["groups"].size() == 2);
  CHECK(j["repeats"] == 2);
  for (const auto& g : j["groups"]) CHECK(g["runs"].size() == 2);
  CHECK(j.contains("proportion_test"));

  auto bad = RunCli("bench --target magic_header --budget-execs 500 "
                    "--policies random,junkpolicy");
  CHECK(bad.exit_code == 2);
}
