// Copyright 2026 The lcmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lcmc/demos.hpp"

namespace {

using lcmc::RngStream;

// Reference values from an independent arbitrary-precision computation.
TEST(HighDimIs, ConstantAndBound) {
  EXPECT_NEAR(lcmc::high_dim_is_constant(), 0.31562680981374638, 1e-14);
  const double phi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  EXPECT_NEAR(lcmc::high_dim_is_constant(),
              phi0 - phi0 * std::exp(-0.5) + 0.5 * std::erfc(1.0 / std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(lcmc::high_dim_is_bound(200, 5), 0.31505755688579388, 1e-14);
  EXPECT_NEAR(lcmc::high_dim_is_bound(200, 40) / 5.7125e-11, 1.0, 1e-3);
  double prev = 1.0;
  for (long m = 1; m <= 60; ++m) {
    const double b = lcmc::high_dim_is_bound(200, m);
    EXPECT_LE(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, 1e-14);
}

TEST(HighDimIs, WitnessExceedsBound) {
  const auto report = lcmc::run_demo(lcmc::DemoScenario::high_dim_is, 200, 5, 60, 3);
  EXPECT_NEAR(report.analytic, 0.31505755688579388, 1e-14);
  EXPECT_NEAR(report.threshold, 0.9 * report.analytic, 1e-15);
  EXPECT_EQ(report.witness.size(), 60u);
  EXPECT_GE(report.fraction_above, 0.95);
  for (double w : report.witness) {
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(HighDimIs, LowDimensionLongRunIsAccurate) {
  RngStream rng(4);
  EXPECT_LT(lcmc::high_dim_is_witness(3, 5000, rng), 0.05);
}

TEST(ShrinkingMh, Floor) {
  EXPECT_NEAR(lcmc::shrinking_mh_floor(1e4), 0.14964953594171332, 1e-13);
  EXPECT_NEAR(lcmc::shrinking_mh_floor(1.5), 0.047565601854432101, 1e-12);
  EXPECT_NEAR(lcmc::shrinking_mh_floor(3.0), 0.14734754820903894, 1e-12);
  EXPECT_EQ(lcmc::shrinking_mh_floor(1.0), 0.0);
}

TEST(ShrinkingMh, ChainStaysInsideUnitBallAsScaleGrows) {
  double prev = -1.0;
  for (long n : {3L, 30L, 300L, 10000L}) {
    int inside = 0;
    for (std::uint64_t r = 0; r < 400; ++r) {
      auto rng = RngStream::derive(5, lcmc::Purpose::demo, {static_cast<std::uint64_t>(n), r});
      if (lcmc::shrinking_mh_witness(n, 10, rng).max_abs_state <= 1.0) ++inside;
    }
    const double frac = inside / 400.0;
    EXPECT_GE(frac, prev - 0.02) << "n = " << n;
    prev = frac;
  }
  EXPECT_GE(prev, 0.99);
}

TEST(ShrinkingMh, WitnessGapAtLargeScale) {
  const auto report = lcmc::run_demo(lcmc::DemoScenario::shrinking_mh, 10000, 10, 60, 6);
  EXPECT_NEAR(report.analytic, 0.14964953594171332, 1e-13);
  EXPECT_GE(report.fraction_above, 0.95);
}

TEST(Demo, ScenarioNames) {
  EXPECT_EQ(lcmc::parse_demo_scenario("high_dim_is"), lcmc::DemoScenario::high_dim_is);
  EXPECT_EQ(lcmc::parse_demo_scenario("shrinking_mh"), lcmc::DemoScenario::shrinking_mh);
  EXPECT_EQ(lcmc::to_string(lcmc::DemoScenario::shrinking_mh), "shrinking_mh");
  EXPECT_THROW(lcmc::parse_demo_scenario("probit"), std::invalid_argument);
}

TEST(Demo, Deterministic) {
  const auto a = lcmc::run_demo(lcmc::DemoScenario::high_dim_is, 50, 4, 10, 9);
  const auto b = lcmc::run_demo(lcmc::DemoScenario::high_dim_is, 50, 4, 10, 9);
  EXPECT_EQ(a.witness, b.witness);
}

}  // namespace
