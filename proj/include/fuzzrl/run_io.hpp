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

#ifndef FUZZRL_RUN_IO_HPP_
#define FUZZRL_RUN_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fuzzrl/engine.hpp"
#include "fuzzrl/env.hpp"

namespace fuzzrl {

// Output root resolution: explicit flag, else $FUZZRL_OUT_DIR, else
// ./runs.
std::string ResolveOutRoot(const std::string& flag_value);

// Per-run directory: <root>/<config-hash-hex>-<seed>.
std::filesystem::path RunDirFor(const std::string& root,
                                const EnvConfig& config);

// Action log: "FRLA" magic, u32 version, then one (u64 step, u8 action)
// record per execution, little-endian, step being the 0-based execution
// index.
bool WriteActionLog(const std::filesystem::path& path,
                    const std::vector<uint8_t>& actions, std::string* error);
std::optional<std::vector<uint8_t>> ReadActionLog(
    const std::filesystem::path& path, std::string* error);

// Writes config.env, summary.json, series.csv, corpus/, dict.hex and
// (when recorded) actions.bin under dir.
bool WriteRunArtifacts(const std::filesystem::path& dir,
                       const EnvConfig& config, const Engine& engine,
                       const std::string& policy_label, std::string* error);

void WriteSeriesCsv(const std::filesystem::path& path,
                    const std::vector<SeriesRow>& series);

std::string SummaryJson(const EnvConfig& config, const RunReport& report,
                        const std::string& policy_label);

// Minimal fields replay needs back out of summary.json.
struct SummaryDigest {
  uint64_t final_coverage = 0;
  uint64_t executions = 0;
  uint64_t corpus_hash = 0;
  uint64_t config_hash = 0;
  uint64_t seed = 0;
};
std::optional<SummaryDigest> ReadSummaryDigest(
    const std::filesystem::path& path, std::string* error);

}  // namespace fuzzrl

#endif  // FUZZRL_RUN_IO_HPP_
