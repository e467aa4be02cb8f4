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
#include <random>

#include "doctest.h"

#include "alig/errors.hpp"
#include "alig/step_rules.hpp"

using namespace alig;

namespace {

// Independent oracle: the closed form evaluated in extended precision.
long double alig_oracle(long double loss, long double gns, long double eta, long double delta) {
  const long double ratio = loss / (gns + delta);
  return ratio < eta ? ratio : eta;
}

}  // namespace

TEST_CASE("alig_step_size examples") {
  CHECK(alig_step_size(0.0, 7.3, 0.1, 1e-5) == 0.0);
  CHECK(alig_step_size(10.0, 1.0, 0.1, 1e-5) == 0.1);

  const double gamma = alig_step_size(0.02, 4.0, 0.1, 1e-5);
  const long double expected = alig_oracle(0.02L, 4.0L, 0.1L, 1e-5L);
  CHECK(std::abs((gamma - expected) / expected) <= 1e-12L);
  CHECK(gamma == doctest::Approx(4.99999e-3).epsilon(1e-6));
}

TEST_CASE("alig_step_size errors") {
  CHECK_THROWS_AS(alig_step_size(1.0, 0.0, 0.1, 0.0), DivisionUndefinedError);
  CHECK(alig_step_size(0.0, 0.0, 0.1, 0.0) == 0.0);
  CHECK_THROWS_AS(alig_step_size(-1.0, 1.0, 0.1, 1e-5), DomainError);
  CHECK_THROWS_AS(alig_step_size(1.0, -1.0, 0.1, 1e-5), DomainError);
  CHECK_THROWS_AS(alig_step_size(1.0, 1.0, 0.0, 1e-5), DomainError);
  CHECK_THROWS_AS(alig_step_size(1.0, 1.0, 0.1, -1e-5), DomainError);
  CHECK_THROWS_AS(alig_step_size(std::nan(""), 1.0, 0.1, 1e-5), DomainError);
  CHECK_THROWS_AS(alig_step_size(1.0, std::numeric_limits<double>::infinity(), 0.1, 1e-5),
                  DomainError);
}

TEST_CASE("sps_step_size examples") {
  CHECK(sps_step_size(0.0, 5.0, 0.5, 1.0, ConstantBound{}, 0) == 0.0);
  CHECK(sps_step_size(1.0, 4.0, 0.5, 10.0, ConstantBound{}, 0) == 0.5);
  // bound(200) = 10 * 0.1^2
  const double decayed = sps_step_size(1.0, 4.0, 0.5, 10.0, MultiplicativeDecay{0.1, 100}, 200);
  CHECK(decayed == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(sps_bound(10.0, MultiplicativeDecay{0.1, 100}, 99) == 10.0);
  CHECK(sps_bound(10.0, MultiplicativeDecay{0.1, 100}, 100) == doctest::Approx(1.0));
}

TEST_CASE("sps_step_size errors and unbounded bound") {
  CHECK_THROWS_AS(sps_step_size(1.0, 0.0, 0.5, 1.0, ConstantBound{}, 0), DivisionUndefinedError);
  CHECK(sps_step_size(0.0, 0.0, 0.5, 1.0, ConstantBound{}, 0) == 0.0);
  CHECK_THROWS_AS(sps_step_size(1.0, 1.0, 0.0, 1.0, ConstantBound{}, 0), DomainError);
  CHECK_THROWS_AS(sps_step_size(1.0, 1.0, 0.5, 1.0, MultiplicativeDecay{1.5, 10}, 0), DomainError);
  CHECK_THROWS_AS(sps_step_size(1.0, 1.0, 0.5, 1.0, MultiplicativeDecay{0.5, 0}, 0), DomainError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(sps_step_size(3.0, 2.0, 0.5, inf, ConstantBound{}, 5) == 3.0);
}

TEST_CASE("constant_step_size") {
  CHECK(constant_step_size(0.1) == 0.1);
  CHECK(constant_step_size(1e-3) == 1e-3);
  CHECK_THROWS_AS(constant_step_size(0.0), DomainError);
  CHECK_THROWS_AS(constant_step_size(-0.1), DomainError);
}

TEST_CASE("exact_polyak_step_size") {
  CHECK(exact_polyak_step_size(0.0, 0.0, 3.0) == 0.0);
  CHECK(exact_polyak_step_size(2.0, 0.0, 8.0) == 0.25);
  CHECK(exact_polyak_step_size(1.0, 0.5, 1.0) == 0.5);
  CHECK_THROWS_AS(exact_polyak_step_size(1.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(exact_polyak_step_size(0.4, 0.5, 1.0), DomainError);
}

TEST_CASE("step_size dispatch") {
  CHECK(step_size(AliG{0.1, 1e-5}, {0.0, 1.0, 0}) == 0.0);
  CHECK(step_size(ConstantLr{0.05}, {99.0, 99.0, 7}) == 0.05);
  CHECK(step_size(AliG{0.1, 1e-5}, {0.02, 4.0, 0}) == alig_step_size(0.02, 4.0, 0.1, 1e-5));
  CHECK(step_size(Sps{0.5, 10.0, MultiplicativeDecay{0.1, 100}}, {1.0, 4.0, 200}) ==
        sps_step_size(1.0, 4.0, 0.5, 10.0, MultiplicativeDecay{0.1, 100}, 200));
  CHECK(step_size(ExactPolyak{0.5}, {1.0, 1.0, 0}) == 0.5);
  CHECK_THROWS_AS(step_size(AliG{0.1, 1e-5}, {-1.0, 1.0, 0}), DomainError);
  CHECK_THROWS_AS(step_size(AliG{0.1, 0.0}, {1.0, 0.0, 0}), DivisionUndefinedError);
}

TEST_CASE("validate rejects out-of-range constants") {
  CHECK_NOTHROW(validate(StepRuleConfig{AliG{}}));
  CHECK_THROWS_AS(validate(StepRuleConfig{AliG{-1.0, 1e-5}}), DomainError);
  CHECK_THROWS_AS(validate(StepRuleConfig{Sps{0.5, 0.0}}), DomainError);
  CHECK_NOTHROW(validate(StepRuleConfig{Sps{0.5, std::numeric_limits<double>::infinity()}}));
  CHECK_THROWS_AS(validate(StepRuleConfig{ConstantLr{0.0}}), DomainError);
  CHECK_THROWS_AS(validate(StepRuleConfig{ExactPolyak{-0.1}}), DomainError);
}

TEST_CASE("step-size properties on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log10(-8.0, 4.0);
  const auto draw = [&] { return std::pow(10.0, log10(rng)); };
  for (int i = 0; i < 20000; ++i) {
    const double loss = draw();
    const double gns = draw();
    const double eta = draw();
    const double delta = draw() * 1e-3;
    const double gamma = alig_step_size(loss, gns, eta, delta);
    REQUIRE(gamma > 0.0);
    REQUIRE(gamma <= eta);
    REQUIRE(alig_step_size(loss * 2.0, gns, eta, delta) >= gamma);
    REQUIRE(alig_step_size(loss, gns * 2.0, eta, delta) <= gamma);
    REQUIRE(alig_step_size(loss, gns, eta, delta * 2.0) <= gamma);

    // Unclipped, delta = 0: identical to the classical Polyak step.
    const double big = 1e300;
    REQUIRE(alig_step_size(loss, gns, big, 0.0) == exact_polyak_step_size(loss, 0.0, gns));

    // c = 1 SPS with a matching bound coincides with delta = 0 ALI-G; c = 2 halves it.
    REQUIRE(sps_step_size(loss, gns, 1.0, eta, ConstantBound{}, i) ==
            alig_step_size(loss, gns, eta, 0.0));
    REQUIRE(sps_step_size(loss, gns, 2.0, big, ConstantBound{}, i) ==
            alig_step_size(loss, gns, big, 0.0) / 2.0);
  }
}
