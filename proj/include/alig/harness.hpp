// Copyright 2026 The alig Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALIG_HARNESS_HPP
#define ALIG_HARNESS_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "alig/config.hpp"
#include "alig/optimizer.hpp"

namespace alig {

nlohmann::ordered_json summary_to_json(const RunSummary& summary, const ExperimentConfig& config);

// Runs one experiment and writes <out_dir>/trace.csv and
// <out_dir>/summary.json. On a run abort the partial trace and a summary
// with "status": "aborted" are written before the exception propagates.
RunSummary run(const ExperimentConfig& config, TraceSink* extra_sink = nullptr);

// Grid file: `key = v1, v2, ...` per line, keys from the config schema.
using Grid = std::vector<std::pair<std::string, std::vector<std::string>>>;
Grid parse_grid(std::string_view text);

enum class SweepMetric { FinalFullLoss, BestFullLoss, FinalAccuracy, InterpolationResidual };
std::optional<SweepMetric> parse_sweep_metric(std::string_view name);

struct SweepOptions {
  std::size_t parallelism = 1;
  SweepMetric sort_by = SweepMetric::FinalFullLoss;
};

struct SweepCell {
  std::size_t index = 0;
  std::string label;  // cell directory name / rule name
  std::vector<std::pair<std::string, std::string>> assignment;
  bool ok = false;
  std::string error;
  std::optional<RunSummary> summary;
  std::filesystem::path out_dir;
};

// Runs the Cartesian product of the grid on top of `base`. Each cell gets
// its own directory <out_dir>/cell_NNN; a failing cell (invalid value or
// aborted run) is recorded and never stops the others. Writes table.csv and
// table.txt to <out_dir>, sorted by options.sort_by with failed cells last.
std::vector<SweepCell> sweep(const KeyValues& base, const Grid& grid, const SweepOptions& options);

// Sections `[name]` followed by rule.* entries.
struct NamedRule {
  std::string name;
  KeyValues entries;
};
std::vector<NamedRule> parse_rules(std::string_view text);

struct RuleOutcome {
  SweepCell cell;
  std::vector<std::size_t> samples;  // sample index consumed at each step
  std::vector<double> gammas;
};

struct Comparison {
  std::vector<RuleOutcome> outcomes;
  bool paired = true;  // every rule saw the same sample sequence
};

// Runs each rule on the same problem instance, initial point and sampling
// sequence. Writes <out_dir>/<name>/{trace.csv,summary.json},
// <out_dir>/step_sizes.csv and <out_dir>/table.{csv,txt}.
Comparison compare_rules(const KeyValues& base, const std::vector<NamedRule>& rules,
                         std::size_t parallelism = 1);

// Fixed-width text rendering of a results table.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace alig

#endif  // ALIG_HARNESS_HPP
