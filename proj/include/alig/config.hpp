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

#ifndef ALIG_CONFIG_HPP
#define ALIG_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alig/geometry.hpp"
#include "alig/optimizer.hpp"
#include "alig/problems.hpp"
#include "alig/step_rules.hpp"

namespace alig {

// Config text format: one `dotted.key = value` per line, `#` starts a
// comment, blank lines are ignored. See README for the full key list.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, int line, const std::string& message);

  const std::string& field() const { return field_; }
  int line() const { return line_; }  // 0 when not tied to a line

 private:
  std::string field_;
  int line_;
};

struct ConfigEntry {
  std::string value;
  int line = 0;
};

// Ordered as written.
using KeyValues = std::vector<std::pair<std::string, ConfigEntry>>;

KeyValues parse_key_values(std::string_view text);

// Replaces the value of `key`, appending it if absent.
void set_entry(KeyValues& entries, const std::string& key, const std::string& value);

struct ExperimentConfig {
  ProblemSpec problem;
  StepRuleConfig rule = AliG{};
  // Defaults follow the tuned CIFAR setting: lr 0.1, momentum 0.9, max
  // squared l2 norm 100.
  MomentumConfig momentum{0.9, MomentumFlavor::HeavyBall};
  FeasibleRegion region = L2Ball{100.0};
  std::int64_t epochs = 100;
  std::uint64_t seed = 0;
  std::int64_t eval_every = 1;
  std::filesystem::path out_dir = "out";

  OptimizerConfig optimizer() const { return {rule, momentum, region}; }
  RunOptions run_options() const { return {epochs, seed, eval_every}; }
};

// Applies defaults and validates every field. Unknown keys, duplicate keys
// and fields belonging to an inactive variant are rejected.
ExperimentConfig build_config(const KeyValues& entries);
ExperimentConfig parse_config(std::string_view text);

// Every recognised key, in documentation order.
const std::vector<std::string>& config_keys();
bool is_config_key(std::string_view key);
// Closest recognised key by edit distance.
std::string suggest_key(std::string_view unknown);

// Resolved config, including defaults, as flat `key = value` text that
// parse_config accepts.
KeyValues resolved_entries(const ExperimentConfig& config);

}  // namespace alig

#endif  // ALIG_CONFIG_HPP
