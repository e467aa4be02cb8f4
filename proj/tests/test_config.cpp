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

#include <string>

#include "doctest.h"

#include "alig/config.hpp"

using namespace alig;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

const std::string kMinimal = "problem.kind = two_moons_mlp\nrule.variant = alig\n";

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
  const ExperimentConfig config = parse_config(kMinimal);
  const auto& rule = std::get<AliG>(config.rule);
  CHECK(rule.eta == 0.1);
  CHECK(rule.delta == 1e-5);
  CHECK(config.momentum.mu == 0.9);
  CHECK(config.momentum.flavor == MomentumFlavor::HeavyBall);
  CHECK(std::get<L2Ball>(config.region).r == 100.0);
  CHECK(config.problem.kind == ProblemKind::TwoMoonsMlp);
  CHECK(config.problem.n == 200);
  CHECK(config.problem.width == 32);
  CHECK(config.problem.noise == 0.1);
  CHECK(config.epochs == 100);
  CHECK(config.eval_every == 1);
  CHECK(config.seed == 0);
}

TEST_CASE("full config with comments") {
  const ExperimentConfig config = parse_config(R"(
# comparison baseline
problem.kind = interp_least_squares
problem.n = 10
problem.p = 30      # overparameterized
problem.seed = 4
rule.variant = sps
rule.c = 1
rule.gamma_bound = inf
rule.schedule = multiplicative_decay
rule.decay_factor = 0.5
rule.decay_period = 20
momentum.mu = 0
momentum.flavor = nesterov
region.r = inf
run.epochs = 0
run.seed = 12
run.eval_every = 5
run.out_dir = results/sps
)");
  const auto& rule = std::get<Sps>(config.rule);
  CHECK(rule.c == 1.0);
  CHECK(std::isinf(rule.gamma_bound));
  const auto& decay = std::get<MultiplicativeDecay>(rule.schedule);
  CHECK(decay.factor == 0.5);
  CHECK(decay.period == 20);
  CHECK(config.momentum.mu == 0.0);
  CHECK(config.momentum.flavor == MomentumFlavor::Nesterov);
  CHECK(std::holds_alternative<Unconstrained>(config.region));
  CHECK(config.problem.n == 10);
  CHECK(config.problem.p == 30);
  CHECK(config.problem.seed == 4);
  CHECK(config.epochs == 0);
  CHECK(config.seed == 12);
  CHECK(config.eval_every == 5);
  CHECK(config.out_dir == "results/sps");
}

TEST_CASE("invalid values are rejected with field diagnostics") {
  const std::string message = error_of(kMinimal + "momentum.mu = 1.2\n");
  CHECK(message.find("line 3") != std::string::npos);
  CHECK(message.find("momentum.mu") != std::string::npos);

  CHECK(field_of(kMinimal + "rule.eta = -1\n") == "rule.eta");
  CHECK(field_of(kMinimal + "rule.eta = 0\n") == "rule.eta");
  CHECK(field_of(kMinimal + "rule.delta = -1e-5\n") == "rule.delta");
  CHECK(field_of(kMinimal + "rule.eta = abc\n") == "rule.eta");
  CHECK(field_of(kMinimal + "rule.eta = 0.1x\n") == "rule.eta");
  CHECK(field_of(kMinimal + "region.r = 0\n") == "region.r");
  CHECK(field_of(kMinimal + "run.eval_every = 0\n") == "run.eval_every");
  CHECK(field_of(kMinimal + "run.epochs = -3\n") == "run.epochs");
  CHECK(field_of(kMinimal + "problem.width = 1\n") == "problem.width");
  CHECK(field_of(kMinimal + "momentum.flavor = adam\n") == "momentum.flavor");
  CHECK(field_of("problem.kind = interp_least_squares\nproblem.n = 60\nrule.variant = alig\n") ==
        "problem.n");
  CHECK(field_of("problem.kind = noninterp_least_squares\nproblem.p = 200\nrule.variant = alig\n") ==
        "problem.p");
  CHECK(field_of("problem.kind = mnist\nrule.variant = alig\n") == "problem.kind");
  CHECK(field_of("problem.kind = two_moons_mlp\nrule.variant = adagrad\n") == "rule.variant");
}

TEST_CASE("unknown keys get a suggestion") {
  const std::string message = error_of(kMinimal + "learning_rate_scheduel = 3\n");
  CHECK(message.find("learning_rate_scheduel") != std::string::npos);
  CHECK(message.find("did you mean 'rule.schedule'") != std::string::npos);
  CHECK(suggest_key("rule.etta") == "rule.eta");
  CHECK(suggest_key("momentum.nu") == "momentum.mu");
}

TEST_CASE("fields of inactive variants are rejected") {
  CHECK(field_of(kMinimal + "rule.c = 0.5\n") == "rule.c");
  CHECK(field_of(kMinimal + "rule.lr = 0.5\n") == "rule.lr");
  CHECK(field_of("problem.kind = two_moons_mlp\nrule.variant = sps\nrule.decay_factor = 0.5\n") ==
        "rule.decay_factor");
  CHECK(field_of("problem.kind = two_moons_mlp\nrule.variant = constant\nrule.eta = 1\n") ==
        "rule.eta");
  CHECK(field_of(kMinimal + "region.kind = unconstrained\nregion.r = 10\n") == "region.r");
  CHECK(field_of(kMinimal + "problem.p = 10\n") == "problem.p");
  CHECK(field_of("problem.kind = interp_least_squares\nproblem.width = 4\nrule.variant = alig\n") ==
        "problem.width");
}

TEST_CASE("syntax errors") {
  CHECK(field_of("rule.variant = alig\n") == "problem.kind");
  CHECK(field_of("problem.kind = two_moons_mlp\n") == "rule.variant");
  CHECK(error_of(kMinimal + "rule.eta\n").find("expected 'key = value'") != std::string::npos);
  CHECK(error_of(kMinimal + "rule.eta =\n").find("missing value") != std::string::npos);
  CHECK(error_of(kMinimal + "rule.eta = 1\nrule.eta = 2\n").find("duplicate") != std::string::npos);
}

TEST_CASE("resolved entries reproduce the config") {
  for (const std::string text :
       {kMinimal,
        std::string("problem.kind = separable_logistic\nproblem.margin = 0.3\nrule.variant = "
                    "exact_polyak\nrule.f_star = 0\nregion.kind = unconstrained\n"),
        std::string("problem.kind = noninterp_least_squares\nrule.variant = sps\nrule.schedule = "
                    "multiplicative_decay\nmomentum.flavor = nesterov\n"),
        std::string("problem.kind = interp_least_squares\nrule.variant = constant\nrule.lr = "
                    "0.003\nregion.r = 12.5\n")}) {
    const ExperimentConfig config = parse_config(text);
    const KeyValues resolved = resolved_entries(config);
    const KeyValues again = resolved_entries(build_config(resolved));
    REQUIRE(resolved.size() == again.size());
    for (std::size_t i = 0; i < resolved.size(); ++i) {
      CHECK(resolved[i].first == again[i].first);
      CHECK(resolved[i].second.value == again[i].second.value);
    }
  }
}

TEST_CASE("set_entry overrides or appends") {
  KeyValues entries = parse_key_values(kMinimal);
  set_entry(entries, "rule.variant", "sps");
  set_entry(entries, "rule.c", "2");
  const ExperimentConfig config = build_config(entries);
  CHECK(std::get<Sps>(config.rule).c == 2.0);
}
