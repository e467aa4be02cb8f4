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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"

#include "alig/errors.hpp"
#include "alig/geometry.hpp"

using namespace alig;

namespace {

ParamVector vec(std::initializer_list<double> values) {
  ParamVector w(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double v : values) {
    w[i++] = v;
  }
  return w;
}

// Nearest point of the disc {|x|^2 <= r} to w in 2-D, by brute-force search
// over the radial parameterization x = rho (cos t, sin t), refined
// around the incumbent.
Eigen::Vector2d brute_force_disc_projection(const Eigen::Vector2d& w, double r) {
  const double radius = std::sqrt(r);
  double best_rho = 0.0;
  double best_theta = 0.0;
  double best = w.squaredNorm();
  double rho_lo = 0.0, rho_hi = radius, theta_lo = -std::numbers::pi, theta_hi = std::numbers::pi;
  for (int round = 0; round < 8; ++round) {
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
      const double rho = rho_lo + (rho_hi - rho_lo) * i / steps;
      for (int j = 0; j <= steps; ++j) {
        const double theta = theta_lo + (theta_hi - theta_lo) * j / steps;
        const Eigen::Vector2d x(rho * std::cos(theta), rho * std::sin(theta));
        const double d = (x - w).squaredNorm();
        if (d < best) {
          best = d;
          best_rho = rho;
          best_theta = theta;
        }
      }
    }
    const double rho_span = (rho_hi - rho_lo) / 50.0;
    const double theta_span = (theta_hi - theta_lo) / 50.0;
    rho_lo = std::max(0.0, best_rho - rho_span);
    rho_hi = std::min(radius, best_rho + rho_span);
    theta_lo = best_theta - theta_span;
    theta_hi = best_theta + theta_span;
  }
  return {best_rho * std::cos(best_theta), best_rho * std::sin(best_theta)};
}

}  // namespace

TEST_CASE("contains") {
  CHECK(contains(Unconstrained{}, vec({1e200, -3.0}), 0.0));
  CHECK(contains(L2Ball{25.0}, vec({3.0, 4.0}), 0.0));
  CHECK_FALSE(contains(L2Ball{1.0}, vec({3.0, 4.0}), 0.0));
  CHECK(contains(L2Ball{24.0}, vec({3.0, 4.0}), 1.0));
  CHECK_THROWS_AS(contains(L2Ball{1.0}, vec({std::nan(""), 0.0})), DomainError);
}

TEST_CASE("project examples") {
  CHECK(project(L2Ball{100.0}, vec({3.0, 4.0})) == vec({3.0, 4.0}));
  CHECK(project(Unconstrained{}, vec({-7.0, 2.0, 0.0})) == vec({-7.0, 2.0, 0.0}));

  const ParamVector projected = project(L2Ball{1.0}, vec({3.0, 4.0}));
  const Eigen::Vector2d oracle = brute_force_disc_projection({3.0, 4.0}, 1.0);
  CHECK(oracle[0] == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(oracle[1] == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(projected[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(projected[1] == doctest::Approx(0.8).epsilon(1e-15));

  CHECK_THROWS_AS(project(L2Ball{1.0}, vec({std::numeric_limits<double>::infinity()})),
                  DomainError);
}

TEST_CASE("projection matches brute force on random 2-D points") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Vector2d w(normal(rng), normal(rng));
    const double r = 2.0;
    const ParamVector projected = project(L2Ball{r}, ParamVector(w));
    const Eigen::Vector2d oracle = brute_force_disc_projection(w, r);
    CHECK((projected - oracle).norm() <= 1e-6);
  }
}

TEST_CASE("norm avoids overflow") {
  const ParamVector w = ParamVector::Constant(4, 1e200);
  CHECK(norm(w) == doctest::Approx(2e200));
  CHECK(norm(ParamVector::Zero(3)) == 0.0);
  CHECK(squared_norm(vec({3.0, 4.0})) == doctest::Approx(25.0).epsilon(1e-15));
  const ParamVector projected = project(L2Ball{4.0}, w);
  CHECK(squared_norm(projected) <= 4.0);
  CHECK(projected[0] == doctest::Approx(1.0));
}

TEST_CASE("region validation") {
  CHECK_NOTHROW(validate(FeasibleRegion{L2Ball{1.0}}));
  CHECK_THROWS_AS(validate(FeasibleRegion{L2Ball{0.0}}), DomainError);
  CHECK_THROWS_AS(validate(FeasibleRegion{L2Ball{-1.0}}), DomainError);
}

TEST_CASE("projection properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> log_r(-1.0, 3.0);
  std::uniform_real_distribution<double> log_scale(-1.5, 1.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const Eigen::Index p : {1, 2, 10, 300}) {
    for (int trial = 0; trial < 300; ++trial) {
      const double r = std::pow(10.0, log_r(rng));
      const L2Ball ball{r};
      ParamVector w1(p), w2(p);
      for (Eigen::Index i = 0; i < p; ++i) {
        w1[i] = normal(rng);
        w2[i] = normal(rng);
      }
      w1 *= std::sqrt(r) * std::pow(10.0, log_scale(rng)) / w1.norm();
      w2 *= std::sqrt(r) * std::pow(10.0, log_scale(rng)) / w2.norm();

      const ParamVector p1 = project(ball, w1);
      const ParamVector p2 = project(ball, w2);
      REQUIRE(project(ball, p1) == p1);
      REQUIRE(contains(ball, p1, 1e-12 * std::max(1.0, r)));
      REQUIRE((p1 - p2).norm() <= (w1 - w2).norm() + 1e-12);
      if (squared_norm(w1) > r) {
        Eigen::Index k = 0;
        w1.cwiseAbs().maxCoeff(&k);
        const double alpha = p1[k] / w1[k];
        REQUIRE(alpha > 0.0);
        REQUIRE(alpha < 1.0);
        REQUIRE((p1 - alpha * w1).norm() <= 1e-14 * p1.norm());
      } else {
        REQUIRE(p1 == w1);
      }
    }
  }
}
