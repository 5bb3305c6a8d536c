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

#include "fuzzrl/run_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace fuzzrl {

namespace {

constexpr char kLogMagic[4] = {'F', 'R', 'L', 'A'};
constexpr uint32_t kLogVersion = 1;

std::string HashHex(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string ResolveOutRoot(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FUZZRL_OUT_DIR"); env && *env) {
    return env;
  }
  return "./runs";
}

std::filesystem::path RunDirFor(const std::string& root,
                                const EnvConfig& config) {
  char leaf[64];
  std::snprintf(leaf, sizeof(leaf), "%s-%llu", HashHex(config.Hash()).c_str(),
                static_cast<unsigned long long>(config.seed));
  return std::filesystem::path(root) / leaf;
}

bool WriteActionLog(const std::filesystem::path& path,
                    const std::vector<uint8_t>& actions, std::string* error) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    if (error) *error = "cannot open " + path.string();
    return false;
  }
  f.write(kLogMagic, 4);
  f.write(reinterpret_cast<const char*>(&kLogVersion), 4);
  for (size_t i = 0; i < actions.size(); ++i) {
    uint64_t step = i;
    f.write(reinterpret_cast<const char*>(&step), 8);
    f.write(reinterpret_cast<const char*>(&actions[i]), 1);
  }
  if (!f) {
    if (error) *error = "short write to " + path.string();
    return false;
  }
  return true;
}

std::optional<std::vector<uint8_t>> ReadActionLog(
    const std::filesystem::path& path, std::string* error) {
  auto fail = [&](const char* msg) -> std::optional<std::vector<uint8_t>> {
    if (error) *error = std::string(msg) + ": " + path.string();
    return std::nullopt;
  };
  std::ifstream f(path, std::ios::binary);
  if (!f) return fail("cannot open action log");
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 8 || std::memcmp(buf.data(), kLogMagic, 4) != 0) {
    return fail("bad action log header");
  }
  uint32_t version;
  std::memcpy(&version, buf.data() + 4, 4);
  if (version != kLogVersion) return fail("unsupported action log version");
  size_t body = buf.size() - 8;
  if (body % 9 != 0) return fail("truncated action log");
  std::vector<uint8_t> actions(body / 9);
  for (size_t i = 0; i < actions.size(); ++i) {
    uint64_t step;
    std::memcpy(&step, buf.data() + 8 + i * 9, 8);
    if (step != i) return fail("non-contiguous steps in action log");
    actions[i] = static_cast<uint8_t>(buf[8 + i * 9 + 8]);
  }
  return actions;
}

void WriteSeriesCsv(const std::filesystem::path& path,
                    const std::vector<SeriesRow>& series) {
  std::ofstream f(path, std::ios::trunc);
  f << "step,wallclock_ns,cov,action,new_edges\n";
  for (const SeriesRow& r : series) {
    f << r.step << ',' << r.wallclock_ns << ',' << r.cov << ','
      << static_cast<int>(r.action) << ',' << r.new_edges << '\n';
  }
}

std::string SummaryJson(const EnvConfig& config, const RunReport& report,
                        const std::string& policy_label) {
  nlohmann::json j;
  j["policy"] = policy_label;
  j["target"] = config.target;
  j["final_coverage"] = report.final_coverage;
  j["executions"] = report.executions;
  j["crashes"] = report.crashes;
  j["corpus_entries"] = report.corpus_entries;
  j["corpus_hash"] = HashHex(report.corpus_hash);
  j["config_hash"] = HashHex(report.config_hash);
  j["seed"] = report.seed;
  j["wall_secs"] = report.wall_secs;
  j["action_selected"] = report.action_selected;
  j["action_credited"] = report.action_credited;
  return j.dump(2) + "\n";
}

bool WriteRunArtifacts(const std::filesystem::path& dir,
                       const EnvConfig& config, const Engine& engine,
                       const std::string& policy_label, std::string* error) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    if (error) *error = "cannot create " + dir.string();
    return false;
  }
  const RunReport& report = engine.report();

  std::ofstream(dir / "config.env", std::ios::trunc) << config.ToText();
  std::ofstream(dir / "summary.json", std::ios::trunc)
      << SummaryJson(config, report, policy_label);
  WriteSeriesCsv(dir / "series.csv", report.series);

  std::filesystem::create_directories(dir / "corpus", ec);
  for (size_t i = 0; i < engine.corpus().size(); ++i) {
    const CorpusEntry& e = engine.corpus()[i];
    char name[48];
    std::snprintf(name, sizeof(name), "%06zu-%08llx.bin", i,
                  static_cast<unsigned long long>(Fnv1a64(e.input.view()) &
                                                  0xFFFFFFFFULL));
    std::ofstream f(dir / "corpus" / name, std::ios::binary | std::ios::trunc);
    f.write(reinterpret_cast<const char*>(e.input.bytes.data()),
            static_cast<std::streamsize>(e.input.size()));
  }

  std::ofstream(dir / "dict.hex", std::ios::trunc)
      << engine.dicts().SnapshotText();

  if (!report.actions.empty()) {
    if (!WriteActionLog(dir / "actions.bin", report.actions, error)) {
      return false;
    }
  }
  return true;
}

std::optional<SummaryDigest> ReadSummaryDigest(
    const std::filesystem::path& path, std::string* error) {
  std::ifstream f(path);
  if (!f) {
    if (error) *error = "cannot open " + path.string();
    return std::nullopt;
  }
  nlohmann::json j;
  try {
    f >> j;
    SummaryDigest d;
    d.final_coverage = j.at("final_coverage").get<uint64_t>();
    d.executions = j.at("executions").get<uint64_t>();
    d.corpus_hash =
        std::stoull(j.at("corpus_hash").get<std::string>(), nullptr, 16);
    d.config_hash =
        std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
    d.seed = j.at("seed").get<uint64_t>();
    return d;
  } catch (const std::exception& e) {
    if (error) *error = std::string("bad summary: ") + e.what();
    return std::nullopt;
  }
}

}  // namespace fuzzrl
