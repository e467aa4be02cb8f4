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

#ifndef ALIG_OBJECTIVE_HPP
#define ALIG_OBJECTIVE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alig/geometry.hpp"

namespace alig {

// A finite family of non-negative per-sample losses {l_z}, z = 0..n-1,
// whose mean is the training objective f(w).
//
// Implementations are immutable after construction; every const member is
// safe to call concurrently.
class StochasticObjective {
 public:
  virtual ~StochasticObjective() = default;

  virtual std::size_t num_samples() const = 0;
  virtual Eigen::Index dim() const = 0;

  // Returns l_z(w) and writes grad l_z(w) into `grad` (resized to dim()).
  virtual double evaluate(const ParamVector& w, std::size_t z, ParamVector& grad) const = 0;

  virtual double loss(const ParamVector& w, std::size_t z) const;

  // Mean of the per-sample losses.
  virtual double full_loss(const ParamVector& w) const;

  // Training-set classification accuracy, for models that classify.
  virtual std::optional<double> accuracy(const ParamVector& /*w*/) const { return std::nullopt; }

  // A w* with l_z(w*) = 0 for all z, when one is known by construction.
  virtual std::optional<ParamVector> planted_solution() const { return std::nullopt; }

  // Starting iterate for a training run. Zero unless the model needs
  // symmetry breaking.
  virtual ParamVector initial_point(std::uint64_t seed) const;

  // Dataset export: column names and one row of values per sample.
  virtual std::vector<std::string> sample_columns() const = 0;
  virtual std::vector<double> sample_row(std::size_t z) const = 0;
};

// max_z l_z(w); zero exactly when w interpolates every sample.
double interpolation_residual(const StochasticObjective& objective, const ParamVector& w);

}  // namespace alig

#endif  // ALIG_OBJECTIVE_HPP
