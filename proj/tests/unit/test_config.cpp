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
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "lcmc/config.hpp"

namespace {

lcmc::ExperimentConfig build(const std::string& text) {
  std::istringstream is(text);
  return lcmc::build_config(lcmc::parse_config_text(is));
}

int error_line(const std::string& text) {
  try {
    build(text);
  } catch (const lcmc::ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_key(const std::string& text) {
  try {
    build(text);
  } catch (const lcmc::ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

TEST(Config, Defaults) {
  const auto c = build("");
  EXPECT_EQ(c.model, "normal_augmentation");
  EXPECT_EQ(c.p, 1);
  EXPECT_EQ(c.theta_true[0], 0.5);
  EXPECT_EQ(c.prior_cov(0, 0), 100.0);
  EXPECT_EQ(c.kernel, lcmc::KernelKind::gibbs);
  EXPECT_EQ(c.start, lcmc::StartMode::stationary);
  EXPECT_EQ(c.reference, lcmc::ReferenceKind::posterior);
  EXPECT_EQ(c.truncation, 1.0);
  EXPECT_EQ(c.ref_size, 1000);
  EXPECT_GE(c.replicates, 2);
}

TEST(Config, ParsesValues) {
  const auto c = build(
      "# comment line\n"
      "p = 2\n"
      "sigma_y = 1, 0.2, 0.2, 2   # full matrix\n"
      "sigma_x = 0.5, 0.7\n"
      "theta_true = 0.1, -0.3\n"
      "n_grid = 20, 200\n"
      "m_grid = 50\n"
      "replicates = 4\n"
      "estimator = burn_in\n"
      "localized = yes\n"
      "reference = bvm\n"
      "truncation = inf\n"
      "seed = 99\n");
  EXPECT_EQ(c.p, 2);
  EXPECT_EQ(c.sigma_y(0, 1), 0.2);
  EXPECT_EQ(c.sigma_y(1, 1), 2.0);
  EXPECT_EQ(c.sigma_x(1, 1), 0.7);
  EXPECT_EQ(c.sigma_x(0, 1), 0.0);
  EXPECT_EQ(c.theta_true[1], -0.3);
  EXPECT_EQ(c.n_grid, (std::vector<lcmc::Index>{20, 200}));
  EXPECT_EQ(c.m_grid, (std::vector<lcmc::Index>{50}));
  EXPECT_EQ(c.estimator.kind, lcmc::EstimatorKind::burn_in);
  EXPECT_TRUE(c.localized);
  EXPECT_EQ(c.reference, lcmc::ReferenceKind::bvm);
  EXPECT_TRUE(std::isinf(c.truncation));
  EXPECT_EQ(c.seed, 99u);
}

TEST(Config, ErrorsCarryLineAndKey) {
  EXPECT_EQ(error_line("p = 1\nbogus = 3\n"), 2);
  EXPECT_EQ(error_key("p = 1\nbogus = 3\n"), "bogus");
  EXPECT_EQ(error_line("p = 1\n\nreplicates = 1\n"), 3);
  EXPECT_EQ(error_key("replicates = 1\n"), "replicates");
  EXPECT_EQ(error_line("seed = 1\nseed = 2\n"), 2);
  EXPECT_EQ(error_line("n_grid = 10, 0\n"), 1);
  EXPECT_EQ(error_key("sigma_y = -1\n"), "sigma_y");
  EXPECT_EQ(error_key("p = 2\nsigma_y = 1, 2, 3\n"), "sigma_y");
  EXPECT_EQ(error_key("kernel = hmc\n"), "kernel");
  EXPECT_EQ(error_key("ref_size = 10\n"), "ref_size");
  EXPECT_EQ(error_key("truncation = 0\n"), "truncation");
  EXPECT_EQ(error_key("localized = maybe\n"), "localized");
  EXPECT_EQ(error_key("p = two\n"), "p");
  EXPECT_EQ(error_line("just words\n"), 1);
  EXPECT_EQ(error_key("estimator = importance\n"), "estimator");
  EXPECT_EQ(error_key("n = 5\nn_grid = 6\n"), "n");
}

TEST(Config, AliasesForGrids) {
  EXPECT_EQ(build("n = 7\n").n_grid, (std::vector<lcmc::Index>{7}));
  EXPECT_EQ(build("chain_length = 30\n").m_grid, (std::vector<lcmc::Index>{30}));
  EXPECT_EQ(build("m = 30, 40\n").m_grid, (std::vector<lcmc::Index>{30, 40}));
}

TEST(Config, OverridesReplaceValues) {
  std::istringstream is("seed = 1\nreplicates = 5\n");
  auto entries = lcmc::parse_config_text(is);
  lcmc::apply_override(entries, "seed=17");
  lcmc::apply_override(entries, " kernel = iid ");
  const auto c = lcmc::build_config(entries);
  EXPECT_EQ(c.seed, 17u);
  EXPECT_EQ(c.kernel, lcmc::KernelKind::iid);
  EXPECT_THROW(lcmc::apply_override(entries, "nope=1"), lcmc::ConfigError);
  EXPECT_THROW(lcmc::apply_override(entries, "seed"), lcmc::ConfigError);
}

TEST(Config, HashTracksContentNotOutput) {
  const auto a = build("seed = 3\n");
  const auto b = build("seed = 3\noutput = /tmp/x.csv\n");
  const auto c = build("seed = 4\n");
  const auto d = build("# same settings, different layout\nseed=3\n\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash(), d.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Config, FileErrors) {
  EXPECT_THROW(lcmc::parse_config_file("/nonexistent/path.conf"), lcmc::ConfigError);
  EXPECT_NO_THROW(lcmc::build_config(lcmc::parse_config_file(LCMC_CONFIG_DIR "/subadditivity.conf")));
  EXPECT_NO_THROW(
      lcmc::build_config(lcmc::parse_config_file(LCMC_CONFIG_DIR "/local_consistency.conf")));
}

}  // namespace
