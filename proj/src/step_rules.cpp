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

#include "alig/step_rules.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alig/errors.hpp"
#include "overloaded.hpp"

namespace alig {
namespace {

using internal::Overloaded;

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

void require_non_negative(double value, const char* name) {
  require_finite(value, name);
  if (value < 0.0) {
    throw DomainError(std::string(name) + " must be non-negative, got " + std::to_string(value));
  }
}

void require_positive(double value, const char* name) {
  require_finite(value, name);
  if (!(value > 0.0)) {
    throw DomainError(std::string(name) + " must be positive, got " + std::to_string(value));
  }
}

void validate_schedule(const BoundSchedule& schedule) {
  if (const auto* decay = std::get_if<MultiplicativeDecay>(&schedule)) {
    require_finite(decay->factor, "decay factor");
    if (!(decay->factor > 0.0 && decay->factor <= 1.0)) {
      throw DomainError("decay factor must lie in (0, 1]");
    }
    if (decay->period <= 0) {
      throw DomainError("decay period must be a positive integer");
    }
  }
}

void validate_sps_bound(double gamma_bound) {
  if (std::isnan(gamma_bound) || !(gamma_bound > 0.0)) {
    throw DomainError("gamma_bound must be positive (or +inf)");
  }
}

}  // namespace

double alig_step_size(double loss, double grad_norm_sq, double eta, double delta) {
  require_non_negative(loss, "loss");
  require_non_negative(grad_norm_sq, "grad_norm_sq");
  require_positive(eta, "eta");
  require_non_negative(delta, "delta");
  if (loss == 0.0) {
    return 0.0;
  }
  const double denominator = grad_norm_sq + delta;
  if (denominator == 0.0) {
    throw DivisionUndefinedError("ALI-G step undefined: zero gradient with positive loss and delta = 0");
  }
  return std::min(loss / denominator, eta);
}

double sps_bound(double gamma_bound, const BoundSchedule& schedule, std::int64_t iteration) {
  return std::visit(Overloaded{
                        [&](const ConstantBound&) { return gamma_bound; },
                        [&](const MultiplicativeDecay& decay) {
                          const auto epochs = static_cast<double>(iteration / decay.period);
                          return gamma_bound * std::pow(decay.factor, epochs);
                        },
                    },
                    schedule);
}

double sps_step_size(double loss, double grad_norm_sq, double c, double gamma_bound,
                     const BoundSchedule& schedule, std::int64_t iteration) {
  require_non_negative(loss, "loss");
  require_non_negative(grad_norm_sq, "grad_norm_sq");
  require_positive(c, "c");
  validate_sps_bound(gamma_bound);
  validate_schedule(schedule);
  if (iteration < 0) {
    throw DomainError("iteration must be non-negative");
  }
  if (loss == 0.0) {
    return 0.0;
  }
  if (grad_norm_sq == 0.0) {
    throw DivisionUndefinedError("SPS step undefined: zero gradient with positive loss");
  }
  return std::min(loss / (c * grad_norm_sq), sps_bound(gamma_bound, schedule, iteration));
}

double constant_step_size(double lr) {
  require_positive(lr, "lr");
  return lr;
}

double exact_polyak_step_size(double loss, double f_star, double grad_norm_sq) {
  require_non_negative(loss, "loss");
  require_non_negative(f_star, "f_star");
  require_finite(grad_norm_sq, "grad_norm_sq");
  if (!(grad_norm_sq > 0.0)) {
    throw DomainError("Polyak step requires a positive squared gradient norm");
  }
  if (loss < f_star) {
    throw DomainError("Polyak step requires loss >= f_star");
  }
  return (loss - f_star) / grad_norm_sq;
}

void validate(const StepRuleConfig& config) {
  std::visit(Overloaded{
                 [](const AliG& rule) {
                   require_positive(rule.eta, "eta");
                   require_non_negative(rule.delta, "delta");
                 },
                 [](const Sps& rule) {
                   require_positive(rule.c, "c");
                   validate_sps_bound(rule.gamma_bound);
                   validate_schedule(rule.schedule);
                 },
                 [](const ConstantLr& rule) { require_positive(rule.lr, "lr"); },
                 [](const ExactPolyak& rule) { require_non_negative(rule.f_star, "f_star"); },
             },
             config);
}

double step_size(const StepRuleConfig& config, const StepInputs& inputs) {
  require_non_negative(inputs.loss, "loss");
  require_non_negative(inputs.grad_norm_sq, "grad_norm_sq");
  return std::visit(
      Overloaded{
          [&](const AliG& rule) {
            return alig_step_size(inputs.loss, inputs.grad_norm_sq, rule.eta, rule.delta);
          },
          [&](const Sps& rule) {
            return sps_step_size(inputs.loss, inputs.grad_norm_sq, rule.c, rule.gamma_bound,
                                 rule.schedule, inputs.iteration);
          },
          [&](const ConstantLr& rule) { return constant_step_size(rule.lr); },
          [&](const ExactPolyak& rule) {
            return exact_polyak_step_size(inputs.loss, rule.f_star, inputs.grad_norm_sq);
          },
      },
      config);
}

double step_size_bound(const StepRuleConfig& config, std::int64_t iteration) {
  return std::visit(
      Overloaded{
          [](const AliG& rule) { return rule.eta; },
          [&](const Sps& rule) { return sps_bound(rule.gamma_bound, rule.schedule, iteration); },
          [](const ConstantLr& rule) { return rule.lr; },
          [](const ExactPolyak&) { return std::numeric_limits<double>::infinity(); },
      },
      config);
}

std::string_view variant_name(const StepRuleConfig& config) {
  return std::visit(Overloaded{
                        [](const AliG&) { return std::string_view("alig"); },
                        [](const Sps&) { return std::string_view("sps"); },
                        [](const ConstantLr&) { return std::string_view("constant"); },
                        [](const ExactPolyak&) { return std::string_view("exact_polyak"); },
                    },
                    config);
}

}  // namespace alig
