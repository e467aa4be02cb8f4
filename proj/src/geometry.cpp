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

#include "alig/geometry.hpp"

#include <cmath>
#include <string>

#include "alig/errors.hpp"

namespace alig {
namespace {

struct ScaledSum {
  double scale = 0.0;
  double sum = 0.0;  // sum of (w_i / scale)^2
};

ScaledSum scaled_sum_of_squares(const ParamVector& w) {
  ScaledSum out;
  out.scale = w.size() == 0 ? 0.0 : w.cwiseAbs().maxCoeff();
  if (out.scale == 0.0) {
    return out;
  }
  const double inv = 1.0 / out.scale;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double x = w[i] * inv;
    out.sum += x * x;
  }
  return out;
}

void require_finite(const ParamVector& w) {
  if (!all_finite(w)) {
    throw DomainError("parameter vector has non-finite entries");
  }
}

}  // namespace

double norm(const ParamVector& w) {
  const ScaledSum s = scaled_sum_of_squares(w);
  return s.scale * std::sqrt(s.sum);
}

double squared_norm(const ParamVector& w) {
  const ScaledSum s = scaled_sum_of_squares(w);
  return (s.scale * s.scale) * s.sum;
}

bool all_finite(const ParamVector& w) { return w.allFinite(); }

void validate(const FeasibleRegion& region) {
  if (const auto* ball = std::get_if<L2Ball>(&region)) {
    if (!std::isfinite(ball->r) || !(ball->r > 0.0)) {
      throw DomainError("L2 ball radius r must be positive and finite, got " +
                        std::to_string(ball->r));
    }
  }
}

bool contains(const FeasibleRegion& region, const ParamVector& w, double tol) {
  require_finite(w);
  if (const auto* ball = std::get_if<L2Ball>(&region)) {
    return squared_norm(w) <= ball->r + tol;
  }
  return true;
}

ParamVector project(const FeasibleRegion& region, const ParamVector& w) {
  require_finite(w);
  const auto* ball = std::get_if<L2Ball>(&region);
  if (ball == nullptr || squared_norm(w) <= ball->r) {
    return w;
  }
  double alpha = std::sqrt(ball->r) / norm(w);
  ParamVector out = alpha * w;
  // Rounding can leave |out|^2 a few ulps above r; shrink until feasible.
  while (squared_norm(out) > ball->r) {
    alpha = std::nextafter(alpha, 0.0);
    out = alpha * w;
  }
  return out;
}

}  // namespace alig
