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

#ifndef LCMC_CHECKS_HPP
#define LCMC_CHECKS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "lcmc/config.hpp"

namespace lcmc {

struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Identity, score, partial-score CLT, Bernstein-von Mises, QMD and
/// transport cross-checks on the configured model. Deterministic in
/// `config.seed`.
std::vector<CheckResult> run_check_suite(const ExperimentConfig& config);

/// Header `check_name,statistic,threshold,pass`.
void write_check_csv(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace lcmc

#endif  // LCMC_CHECKS_HPP
