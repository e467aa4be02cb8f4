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

#ifndef ALIG_OPTIMIZER_HPP
#define ALIG_OPTIMIZER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "alig/geometry.hpp"
#include "alig/objective.hpp"
#include "alig/step_rules.hpp"

namespace alig {

enum class MomentumFlavor { HeavyBall, Nesterov };

// mu = 0 disables momentum.
struct MomentumConfig {
  double mu = 0.0;
  MomentumFlavor flavor = MomentumFlavor::HeavyBall;
};

void validate(const MomentumConfig& momentum);

struct OptimizerConfig {
  StepRuleConfig rule = AliG{};
  MomentumConfig momentum;
  FeasibleRegion region = Unconstrained{};
};

struct OptimizerState {
  ParamVector w;
  ParamVector velocity;
  std::int64_t t = 0;
};

struct StepRecord {
  std::int64_t t = 0;
  double gamma = 0.0;
  double sample_loss = 0.0;
  double grad_norm_sq = 0.0;
  double param_norm_sq = 0.0;  // |w_{t+1}|^2
};

// Starts at the projection of w0 with zero velocity.
OptimizerState init(const ParamVector& w0, const FeasibleRegion& region);

// One projected stochastic step. With gamma the rule's step size and g the
// sample gradient:
//   mu = 0      w <- P(w - gamma g)
//   heavy ball  v <- mu v - gamma g;  w <- P(w + v)
//   Nesterov    v <- mu v - gamma g;  w <- P(w + mu v - gamma g)
// The velocity is never projected. A zero step leaves w untouched.
StepRecord step(OptimizerState& state, double sample_loss, const ParamVector& grad,
                const OptimizerConfig& config);

struct TraceRow {
  StepRecord step;
  std::int64_t epoch = 0;
  std::size_t sample = 0;
  std::optional<double> full_loss;  // set on the last step of an evaluated epoch
  std::optional<double> accuracy;
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const TraceRow& row) = 0;
  virtual void flush() {}
};

class NullTraceSink final : public TraceSink {
 public:
  void record(const TraceRow&) override {}
};

class MemoryTraceSink final : public TraceSink {
 public:
  void record(const TraceRow& row) override { rows.push_back(row); }
  std::vector<TraceRow> rows;
};

struct RunOptions {
  std::int64_t epochs = 1;
  std::uint64_t seed = 0;
  std::int64_t eval_every = 1;  // in epochs; the final epoch is always evaluated
};

struct RunSummary {
  double final_full_loss = 0.0;
  double best_full_loss = 0.0;  // running minimum, including the starting point
  std::optional<double> final_accuracy;
  double wall_time_seconds = 0.0;
  std::int64_t steps_taken = 0;
  double interpolation_residual_final = 0.0;
};

// Runs `options.epochs` passes, each over a fresh seeded permutation of the
// sample indices. Throws RunAborted on a non-finite loss, gradient or
// iterate; the sink is flushed before any exception leaves.
RunSummary run_epochs(OptimizerState& state, const StochasticObjective& objective,
                      const OptimizerConfig& config, const RunOptions& options,
                      TraceSink& sink);

}  // namespace alig

#endif  // ALIG_OPTIMIZER_HPP
