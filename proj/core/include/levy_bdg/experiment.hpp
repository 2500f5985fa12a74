/*
   Copyright 2026 The levy_bdg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace levy_bdg {

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration. The message starts with the offending field path,
/// e.g. "experiments[2].measure.atoms[0].w: ...".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv, both };

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  unsigned threads = 1;
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::both;
  bool timing = false;                // keep measured runtimes in the output
};

/// One flat CSV row.
struct ReportRow {
  std::string experiment;
  std::string id;
  std::string variant;
  double p = 0.0;
  double order = 0.0;
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double se_lhs = 0.0;
  double rhs = 0.0;
  double se_rhs = 0.0;
  double constant = 0.0;
  double ratio = 0.0;
  std::string verdict;  // a Verdict string or "-" for informational rows
  double runtime_ms = 0.0;
  std::string sweep_value;  // empty outside sweeps
};

struct RunResult {
  nlohmann::json report;
  std::vector<ReportRow> rows;
  std::string config_hash;
  int exit_code = 0;  // 0 all acceptable, 2 any fail
};

/// Reads and parses a config file; throws ConfigError on I/O or syntax errors.
nlohmann::json load_config(const std::filesystem::path& path);

/// Checks the schema (version, known keys, required fields). Ranged values
/// {"range":[...]} are allowed only when `allow_ranges` is set.
void validate_config(const nlohmann::json& config, bool allow_ranges);

/// JSON pointers of every {"range":[...]} value.
std::vector<nlohmann::json::json_pointer> find_ranges(const nlohmann::json& config);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// Executes every experiment. Throws ConfigError for invalid specs and
/// std::runtime_error for non-finite estimates.
RunResult run_config(nlohmann::json config, const RunOptions& options);

/// Runs once per value of the single ranged parameter and adds a trend
/// summary. Throws ConfigError unless exactly one range is present.
RunResult sweep_config(nlohmann::json config, const RunOptions& options);

std::string rows_to_csv(const std::vector<ReportRow>& rows, const std::string& config_hash,
                        bool with_sweep_column);

/// Writes <stem>.json and/or <stem>.csv into options.out_dir.
void write_outputs(const RunResult& result, const RunOptions& options, const std::string& stem,
                   bool with_sweep_column);

}  // namespace levy_bdg
