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

#include "alig/objective.hpp"

#include <algorithm>

namespace alig {

double StochasticObjective::loss(const ParamVector& w, std::size_t z) const {
  ParamVector scratch;
  return evaluate(w, z, scratch);
}

double StochasticObjective::full_loss(const ParamVector& w) const {
  const std::size_t n = num_samples();
  double total = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    total += loss(w, z);
  }
  return total / static_cast<double>(n);
}

ParamVector StochasticObjective::initial_point(std::uint64_t /*seed*/) const {
  return ParamVector::Zero(dim());
}

double interpolation_residual(const StochasticObjective& objective, const ParamVector& w) {
  double worst = 0.0;
  for (std::size_t z = 0; z < objective.num_samples(); ++z) {
    worst = std::max(worst, objective.loss(w, z));
  }
  return worst;
}

}  // namespace alig
