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

#include "alig/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "numfmt.hpp"

namespace alig {
namespace {

using internal::format_double;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) {
    prev[j] = j;
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitution = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitution});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Looks up entries by key and remembers which were consumed.
class Reader {
 public:
  explicit Reader(const KeyValues& entries) {
    for (const auto& [key, entry] : entries) {
      if (!is_config_key(key)) {
        throw ConfigError(key, entry.line,
                          "unknown key; did you mean '" + suggest_key(key) + "'?");
      }
      if (!entries_.emplace(key, entry).second) {
        throw ConfigError(key, entry.line, "duplicate key");
      }
    }
  }

  const ConfigEntry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  // Every present key with the given prefix must be in `allowed`.
  void restrict(const std::string& prefix, const std::set<std::string>& allowed,
                const std::string& context) const {
    for (const auto& [key, entry] : entries_) {
      if (key.rfind(prefix, 0) == 0 && !allowed.contains(key)) {
        throw ConfigError(key, entry.line, "not used by " + context);
      }
    }
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const ConfigEntry* entry = find(key);
    return entry ? entry->value : fallback;
  }

  double real(const std::string& key, double fallback) const {
    const ConfigEntry* entry = find(key);
    if (entry == nullptr) {
      return fallback;
    }
    double value = 0.0;
    const char* begin = entry->value.data();
    const char* end = begin + entry->value.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end || std::isnan(value)) {
      throw ConfigError(key, entry->line, "expected a real number, got '" + entry->value + "'");
    }
    return value;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    const ConfigEntry* entry = find(key);
    if (entry == nullptr) {
      return fallback;
    }
    std::uint64_t value = 0;
    const char* begin = entry->value.data();
    const char* end = begin + entry->value.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end) {
      throw ConfigError(key, entry->line,
                        "expected a non-negative integer, got '" + entry->value + "'");
    }
    return value;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const ConfigEntry* entry = find(key);
    throw ConfigError(key, entry ? entry->line : 0, message);
  }

 private:
  std::map<std::string, ConfigEntry> entries_;
};

double positive(const Reader& in, const std::string& key, double fallback, bool allow_inf = false) {
  const double value = in.real(key, fallback);
  if (!(value > 0.0) || (!allow_inf && std::isinf(value))) {
    in.fail(key, "must be positive" + std::string(allow_inf ? "" : " and finite") + ", got " +
                     format_double(value));
  }
  return value;
}

double non_negative(const Reader& in, const std::string& key, double fallback) {
  const double value = in.real(key, fallback);
  if (!(value >= 0.0) || std::isinf(value)) {
    in.fail(key, "must be non-negative and finite, got " + format_double(value));
  }
  return value;
}

std::uint64_t positive_integer(const Reader& in, const std::string& key, std::uint64_t fallback) {
  const std::uint64_t value = in.integer(key, fallback);
  if (value == 0) {
    in.fail(key, "must be a positive integer");
  }
  return value;
}

std::int64_t signed_count(const Reader& in, const std::string& key, std::uint64_t value) {
  if (value > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    in.fail(key, "value too large");
  }
  return static_cast<std::int64_t>(value);
}

ProblemSpec read_problem(const Reader& in) {
  if (in.find("problem.kind") == nullptr) {
    throw ConfigError("problem.kind", 0, "required key missing");
  }
  const std::string kind_name = in.text("problem.kind", "");
  const auto kind = parse_problem_kind(kind_name);
  if (!kind) {
    in.fail("problem.kind",
            "unknown problem kind '" + kind_name +
                "' (expected interp_least_squares, separable_logistic, two_moons_mlp or "
                "noninterp_least_squares)");
  }
  ProblemSpec spec = default_problem_spec(*kind);
  std::set<std::string> allowed = {"problem.kind", "problem.n", "problem.seed"};
  switch (*kind) {
    case ProblemKind::InterpLeastSquares:
      allowed.insert("problem.p");
      break;
    case ProblemKind::SeparableLogistic:
      allowed.insert({"problem.p", "problem.margin"});
      break;
    case ProblemKind::TwoMoonsMlp:
      allowed.insert({"problem.width", "problem.noise"});
      break;
    case ProblemKind::NonInterpLeastSquares:
      allowed.insert({"problem.p", "problem.noise"});
      break;
  }
  in.restrict("problem.", allowed, "problem kind '" + kind_name + "'");

  spec.n = positive_integer(in, "problem.n", spec.n);
  spec.seed = in.integer("problem.seed", spec.seed);
  if (allowed.contains("problem.p")) {
    spec.p = positive_integer(in, "problem.p", spec.p);
  }
  if (allowed.contains("problem.margin")) {
    spec.margin = positive(in, "problem.margin", spec.margin);
  }
  if (allowed.contains("problem.width")) {
    spec.width = positive_integer(in, "problem.width", spec.width);
    if (spec.width < 2) {
      in.fail("problem.width", "hidden width must be at least 2");
    }
  }
  if (*kind == ProblemKind::TwoMoonsMlp) {
    spec.noise = non_negative(in, "problem.noise", spec.noise);
  }
  if (*kind == ProblemKind::NonInterpLeastSquares) {
    spec.noise = positive(in, "problem.noise", spec.noise);
    if (spec.n <= spec.p) {
      in.fail(in.find("problem.n") ? "problem.n" : "problem.p",
              "non-interpolating least squares needs n > p");
    }
  }
  if (*kind == ProblemKind::InterpLeastSquares && spec.p < spec.n) {
    in.fail(in.find("problem.p") ? "problem.p" : "problem.n",
            "interpolating least squares needs p >= n");
  }
  return spec;
}

StepRuleConfig read_rule(const Reader& in) {
  if (in.find("rule.variant") == nullptr) {
    throw ConfigError("rule.variant", 0, "required key missing");
  }
  const std::string variant = in.text("rule.variant", "");
  if (variant == "alig") {
    in.restrict("rule.", {"rule.variant", "rule.eta", "rule.delta"}, "rule variant 'alig'");
    AliG rule;
    rule.eta = positive(in, "rule.eta", rule.eta);
    rule.delta = non_negative(in, "rule.delta", rule.delta);
    return rule;
  }
  if (variant == "sps") {
    const std::string schedule = in.text("rule.schedule", "constant");
    std::set<std::string> allowed = {"rule.variant", "rule.c", "rule.gamma_bound",
                                     "rule.schedule"};
    if (schedule == "multiplicative_decay") {
      allowed.insert({"rule.decay_factor", "rule.decay_period"});
    } else if (schedule != "constant") {
      in.fail("rule.schedule", "unknown schedule '" + schedule +
                                   "' (expected constant or multiplicative_decay)");
    }
    in.restrict("rule.", allowed, "rule variant 'sps' with schedule '" + schedule + "'");
    Sps rule;
    rule.c = positive(in, "rule.c", rule.c);
    rule.gamma_bound = positive(in, "rule.gamma_bound", rule.gamma_bound, /*allow_inf=*/true);
    if (schedule == "multiplicative_decay") {
      MultiplicativeDecay decay;
      decay.factor = positive(in, "rule.decay_factor", 0.1);
      if (decay.factor > 1.0) {
        in.fail("rule.decay_factor", "must lie in (0, 1]");
      }
      decay.period = signed_count(in, "rule.decay_period",
                                  positive_integer(in, "rule.decay_period", 1000));
      rule.schedule = decay;
    }
    return rule;
  }
  if (variant == "constant") {
    in.restrict("rule.", {"rule.variant", "rule.lr"}, "rule variant 'constant'");
    ConstantLr rule;
    rule.lr = positive(in, "rule.lr", rule.lr);
    return rule;
  }
  if (variant == "exact_polyak") {
    in.restrict("rule.", {"rule.variant", "rule.f_star"}, "rule variant 'exact_polyak'");
    ExactPolyak rule;
    rule.f_star = non_negative(in, "rule.f_star", rule.f_star);
    return rule;
  }
  in.fail("rule.variant", "unknown rule variant '" + variant +
                              "' (expected alig, sps, constant or exact_polyak)");
}

MomentumConfig read_momentum(const Reader& in, MomentumConfig momentum) {
  momentum.mu = in.real("momentum.mu", momentum.mu);
  if (!(momentum.mu >= 0.0 && momentum.mu < 1.0)) {
    in.fail("momentum.mu", "must lie in [0, 1), got " + format_double(momentum.mu));
  }
  const std::string flavor = in.text("momentum.flavor", "heavy_ball");
  if (flavor == "heavy_ball") {
    momentum.flavor = MomentumFlavor::HeavyBall;
  } else if (flavor == "nesterov") {
    momentum.flavor = MomentumFlavor::Nesterov;
  } else {
    in.fail("momentum.flavor", "unknown flavor '" + flavor + "' (expected heavy_ball or nesterov)");
  }
  return momentum;
}

FeasibleRegion read_region(const Reader& in) {
  const std::string kind = in.text("region.kind", "l2_ball");
  if (kind == "unconstrained") {
    in.restrict("region.", {"region.kind"}, "region kind 'unconstrained'");
    return Unconstrained{};
  }
  if (kind != "l2_ball") {
    in.fail("region.kind", "unknown region kind '" + kind + "' (expected l2_ball or unconstrained)");
  }
  // r = inf is accepted as "no constraint".
  const double r = positive(in, "region.r", 100.0, /*allow_inf=*/true);
  if (std::isinf(r)) {
    return Unconstrained{};
  }
  return L2Ball{r};
}

}  // namespace

ConfigError::ConfigError(const std::string& field, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         field + ": " + message),
      field_(field),
      line_(line) {}

KeyValues parse_key_values(std::string_view text) {
  KeyValues entries;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto newline = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, newline == std::string_view::npos ? std::string_view::npos : newline - pos);
    pos = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
    ++line_number;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), line_number, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("", line_number, "missing key before '='");
    }
    if (value.empty()) {
      throw ConfigError(key, line_number, "missing value");
    }
    for (const auto& [existing, entry] : entries) {
      if (existing == key) {
        throw ConfigError(key, line_number,
                          "duplicate key (first set on line " + std::to_string(entry.line) + ")");
      }
    }
    entries.emplace_back(key, ConfigEntry{value, line_number});
  }
  return entries;
}

void set_entry(KeyValues& entries, const std::string& key, const std::string& value) {
  for (auto& [existing, entry] : entries) {
    if (existing == key) {
      entry.value = value;
      return;
    }
  }
  entries.emplace_back(key, ConfigEntry{value, 0});
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "problem.kind",     "problem.n",          "problem.p",         "problem.width",
      "problem.noise",    "problem.margin",     "problem.seed",      "rule.variant",
      "rule.eta",         "rule.delta",         "rule.c",            "rule.gamma_bound",
      "rule.schedule",    "rule.decay_factor",  "rule.decay_period", "rule.lr",
      "rule.f_star",      "momentum.mu",        "momentum.flavor",   "region.kind",
      "region.r",         "run.epochs",         "run.seed",          "run.eval_every",
      "run.out_dir",
  };
  return keys;
}

bool is_config_key(std::string_view key) {
  const auto& keys = config_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::string suggest_key(std::string_view unknown) {
  std::string best;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (const auto& key : config_keys()) {
    // Compare against both the dotted key and its last segment so that
    // "learning_rate" style names still land near "rule.lr" and friends.
    const std::string_view leaf = std::string_view(key).substr(key.find('.') + 1);
    const std::size_t distance =
        std::min(edit_distance(unknown, key), edit_distance(unknown, leaf));
    if (distance < best_distance) {
      best_distance = distance;
      best = key;
    }
  }
  return best;
}

ExperimentConfig build_config(const KeyValues& entries) {
  const Reader in(entries);
  ExperimentConfig config;
  config.problem = read_problem(in);
  config.rule = read_rule(in);
  config.momentum = read_momentum(in, config.momentum);
  config.region = read_region(in);
  config.epochs = signed_count(in, "run.epochs", in.integer("run.epochs", 100));
  config.seed = in.integer("run.seed", 0);
  config.eval_every = signed_count(in, "run.eval_every", positive_integer(in, "run.eval_every", 1));
  config.out_dir = in.text("run.out_dir", "out");
  return config;
}

ExperimentConfig parse_config(std::string_view text) { return build_config(parse_key_values(text)); }

KeyValues resolved_entries(const ExperimentConfig& config) {
  KeyValues out;
  const auto add = [&out](const std::string& key, const std::string& value) {
    out.emplace_back(key, ConfigEntry{value, 0});
  };
  const ProblemSpec& problem = config.problem;
  add("problem.kind", std::string(problem_kind_name(problem.kind)));
  add("problem.n", std::to_string(problem.n));
  switch (problem.kind) {
    case ProblemKind::InterpLeastSquares:
      add("problem.p", std::to_string(problem.p));
      break;
    case ProblemKind::SeparableLogistic:
      add("problem.p", std::to_string(problem.p));
      add("problem.margin", format_double(problem.margin));
      break;
    case ProblemKind::TwoMoonsMlp:
      add("problem.width", std::to_string(problem.width));
      add("problem.noise", format_double(problem.noise));
      break;
    case ProblemKind::NonInterpLeastSquares:
      add("problem.p", std::to_string(problem.p));
      add("problem.noise", format_double(problem.noise));
      break;
  }
  add("problem.seed", std::to_string(problem.seed));

  add("rule.variant", std::string(variant_name(config.rule)));
  if (const auto* rule = std::get_if<AliG>(&config.rule)) {
    add("rule.eta", format_double(rule->eta));
    add("rule.delta", format_double(rule->delta));
  } else if (const auto* rule = std::get_if<Sps>(&config.rule)) {
    add("rule.c", format_double(rule->c));
    add("rule.gamma_bound", format_double(rule->gamma_bound));
    if (const auto* decay = std::get_if<MultiplicativeDecay>(&rule->schedule)) {
      add("rule.schedule", "multiplicative_decay");
      add("rule.decay_factor", format_double(decay->factor));
      add("rule.decay_period", std::to_string(decay->period));
    } else {
      add("rule.schedule", "constant");
    }
  } else if (const auto* rule = std::get_if<ConstantLr>(&config.rule)) {
    add("rule.lr", format_double(rule->lr));
  } else if (const auto* rule = std::get_if<ExactPolyak>(&config.rule)) {
    add("rule.f_star", format_double(rule->f_star));
  }

  add("momentum.mu", format_double(config.momentum.mu));
  add("momentum.flavor",
      config.momentum.flavor == MomentumFlavor::HeavyBall ? "heavy_ball" : "nesterov");
  if (const auto* ball = std::get_if<L2Ball>(&config.region)) {
    add("region.kind", "l2_ball");
    add("region.r", format_double(ball->r));
  } else {
    add("region.kind", "unconstrained");
  }
  add("run.epochs", std::to_string(config.epochs));
  add("run.seed", std::to_string(config.seed));
  add("run.eval_every", std::to_string(config.eval_every));
  add("run.out_dir", config.out_dir.string());
  return out;
}

}  // namespace alig
