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

#ifndef ALIG_STEP_RULES_HPP
#define ALIG_STEP_RULES_HPP

#include <cstdint>
#include <limits>
#include <string_view>
#include <variant>

namespace alig {

inline constexpr double kDefaultDelta = 1e-5;
inline constexpr double kDefaultEta = 0.1;
// Placeholder; SPS's constant has to be tuned per problem.
inline constexpr double kDefaultSpsC = 0.5;

// Adaptive Learning-rate for Interpolation with Gradients:
//   gamma = min{ loss / (|grad|^2 + delta), eta }.
struct AliG {
  double eta = kDefaultEta;
  double delta = kDefaultDelta;
};

// SPS maximal learning-rate schedules. The bound at iteration t is
//   gamma_bound                              (ConstantBound)
//   gamma_bound * factor^floor(t / period)   (MultiplicativeDecay)
struct ConstantBound {};
struct MultiplicativeDecay {
  double factor = 1.0;
  std::int64_t period = 1;
};
using BoundSchedule = std::variant<ConstantBound, MultiplicativeDecay>;

// Stochastic Polyak step: gamma = min{ loss / (c |grad|^2), bound(t) }.
struct Sps {
  double c = kDefaultSpsC;
  double gamma_bound = kDefaultEta;
  BoundSchedule schedule = ConstantBound{};
};

struct ConstantLr {
  double lr = 0.1;
};

// Classical Polyak step with a known optimal value.
struct ExactPolyak {
  double f_star = 0.0;
};

using StepRuleConfig = std::variant<AliG, Sps, ConstantLr, ExactPolyak>;

struct StepInputs {
  double loss = 0.0;
  double grad_norm_sq = 0.0;
  std::int64_t iteration = 0;
};

double alig_step_size(double loss, double grad_norm_sq, double eta, double delta);

double sps_bound(double gamma_bound, const BoundSchedule& schedule, std::int64_t iteration);

double sps_step_size(double loss, double grad_norm_sq, double c, double gamma_bound,
                     const BoundSchedule& schedule, std::int64_t iteration);

double constant_step_size(double lr);

double exact_polyak_step_size(double loss, double f_star, double grad_norm_sq);

// Throws DomainError if the active variant's constants are out of range.
void validate(const StepRuleConfig& config);

double step_size(const StepRuleConfig& config, const StepInputs& inputs);

// Largest value step_size can return at this iteration (+inf for ExactPolyak).
double step_size_bound(const StepRuleConfig& config, std::int64_t iteration);

std::string_view variant_name(const StepRuleConfig& config);

}  // namespace alig

#endif  // ALIG_STEP_RULES_HPP
