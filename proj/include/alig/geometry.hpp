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

#ifndef ALIG_GEOMETRY_HPP
#define ALIG_GEOMETRY_HPP

#include <variant>

#include <Eigen/Core>

namespace alig {

// Model parameters w in R^p.
using ParamVector = Eigen::VectorXd;

struct Unconstrained {};

// { w : |w|^2 <= r }. Note that r bounds the *squared* Euclidean norm.
struct L2Ball {
  double r = 100.0;
};

using FeasibleRegion = std::variant<Unconstrained, L2Ball>;

// Euclidean norm, accumulated after scaling by max |w_i| so that large
// entries cannot overflow the sum of squares.
double norm(const ParamVector& w);
double squared_norm(const ParamVector& w);

bool all_finite(const ParamVector& w);

void validate(const FeasibleRegion& region);

bool contains(const FeasibleRegion& region, const ParamVector& w, double tol = 0.0);

// Euclidean projection onto the region. For the ball this is a radial
// rescaling; the result always satisfies squared_norm(result) <= r, so
// projecting twice is a no-op.
ParamVector project(const FeasibleRegion& region, const ParamVector& w);

}  // namespace alig

#endif  // ALIG_GEOMETRY_HPP
