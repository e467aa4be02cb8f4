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

#include "alig/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "alig/errors.hpp"

namespace alig {
namespace {

std::string where(std::int64_t t, std::int64_t epoch, std::size_t z) {
  return " at iteration " + std::to_string(t) + " (epoch " + std::to_string(epoch) + ", sample " +
         std::to_string(z) + ")";
}

}  // namespace

void validate(const MomentumConfig& momentum) {
  if (!(momentum.mu >= 0.0 && momentum.mu < 1.0)) {
    throw DomainError("momentum mu must lie in [0, 1), got " + std::to_string(momentum.mu));
  }
}

OptimizerState init(const ParamVector& w0, const FeasibleRegion& region) {
  validate(region);
  OptimizerState state;
  state.w = project(region, w0);
  state.velocity = ParamVector::Zero(w0.size());
  state.t = 0;
  return state;
}

StepRecord step(OptimizerState& state, double sample_loss, const ParamVector& grad,
                const OptimizerConfig& config) {
  if (grad.size() != state.w.size()) {
    throw DimensionMismatchError("gradient has dimension " + std::to_string(grad.size()) +
                                 ", parameters have " + std::to_string(state.w.size()));
  }
  if (!all_finite(grad)) {
    throw DomainError("gradient has non-finite entries");
  }
  const double grad_norm_sq = squared_norm(grad);
  const double gamma = step_size(config.rule, StepInputs{sample_loss, grad_norm_sq, state.t});
  const double mu = config.momentum.mu;

  if (mu == 0.0) {
    if (gamma != 0.0) {
      state.w = project(config.region, state.w - gamma * grad);
    }
  } else {
    state.velocity = mu * state.velocity - gamma * grad;
    if (config.momentum.flavor == MomentumFlavor::HeavyBall) {
      state.w = project(config.region, state.w + state.velocity);
    } else {
      state.w = project(config.region, state.w + mu * state.velocity - gamma * grad);
    }
  }

  StepRecord record;
  record.t = state.t;
  record.gamma = gamma;
  record.sample_loss = sample_loss;
  record.grad_norm_sq = grad_norm_sq;
  record.param_norm_sq = squared_norm(state.w);
  ++state.t;
  return record;
}

RunSummary run_epochs(OptimizerState& state, const StochasticObjective& objective,
                      const OptimizerConfig& config, const RunOptions& options,
                      TraceSink& sink) {
  const auto start = std::chrono::steady_clock::now();
  if (objective.num_samples() == 0) {
    throw DomainError("objective has no samples");
  }
  if (options.epochs < 0 || options.eval_every <= 0) {
    throw DomainError("epochs must be non-negative and eval_every positive");
  }
  validate(config.rule);
  validate(config.momentum);
  validate(config.region);
  if (state.w.size() != objective.dim()) {
    throw DimensionMismatchError("state dimension does not match objective");
  }

  RunSummary summary;
  summary.final_full_loss = objective.full_loss(state.w);
  summary.best_full_loss = summary.final_full_loss;
  summary.final_accuracy = objective.accuracy(state.w);

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(objective.num_samples());
  ParamVector grad(objective.dim());

  try {
    for (std::int64_t epoch = 0; epoch < options.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      const bool evaluate_epoch =
          (epoch + 1) % options.eval_every == 0 || epoch + 1 == options.epochs;

      for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t z = order[i];
        const double loss = objective.evaluate(state.w, z, grad);
        // A finite gradient whose squared norm overflows counts as divergence too.
        if (!std::isfinite(loss) || !all_finite(grad) || !std::isfinite(squared_norm(grad))) {
          throw RunAborted("non-finite loss or gradient" + where(state.t, epoch, z), state.t);
        }
        TraceRow row;
        row.epoch = epoch;
        row.sample = z;
        row.step = step(state, loss, grad, config);
        ++summary.steps_taken;
        if (!all_finite(state.w)) {
          throw RunAborted("non-finite iterate" + where(row.step.t, epoch, z), row.step.t);
        }

        if (evaluate_epoch && i + 1 == order.size()) {
          const double full = objective.full_loss(state.w);
          if (!std::isfinite(full)) {
            throw RunAborted("non-finite full loss" + where(row.step.t, epoch, z), row.step.t);
          }
          row.full_loss = full;
          row.accuracy = objective.accuracy(state.w);
          summary.final_full_loss = full;
          summary.best_full_loss = std::min(summary.best_full_loss, full);
          summary.final_accuracy = row.accuracy;
        }
        sink.record(row);
      }
    }
  } catch (...) {
    sink.flush();
    throw;
  }
  sink.flush();

  summary.interpolation_residual_final = interpolation_residual(objective, state.w);
  summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace alig
