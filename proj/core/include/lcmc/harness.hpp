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

#ifndef LCMC_HARNESS_HPP
#define LCMC_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcmc/config.hpp"
#include "lcmc/models.hpp"

namespace lcmc {

/// Failure inside a risk computation, tagged with where it happened.
class RiskError : public std::runtime_error {
 public:
  RiskError(Index n, Index m, int replicate, int chain, const std::string& what);
  Index n;
  Index m;
  int replicate;
  int chain;
};

struct RiskRow {
  Index n = 0;
  Index m = 0;
  std::string estimator;
  bool localized = false;
  double risk_mean = 0.0;
  double risk_stderr = 0.0;
  /// Mean distance from m exact reference draws to the reference sample.
  double floor = 0.0;
  int replicates = 0;
  int chains = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  /// Mean |total mass - 1| of the raw importance weights (importance only).
  std::optional<double> mass_deviation;
  /// Per-replicate risk (mean over chains), in replicate order.
  std::vector<double> per_replicate;
};

struct RiskReport {
  std::vector<RiskRow> rows;

  /// Appends `other`; throws std::invalid_argument when any row carries a
  /// different config hash.
  void merge(const RiskReport& other);
  const RiskRow& at(Index n, Index m) const;
};

/// Header `n,m,estimator,localized,risk_mean,risk_stderr,floor,replicates,chains,seed,config_hash`.
void write_risk_csv(std::ostream& os, const RiskReport& report);

std::shared_ptr<const NormalAugmentationModel> make_model(const ExperimentConfig& config);

/// Nested replication: for each n, `replicates` datasets, each with
/// `chains_per_replicate` chains run once to max(m_grid); the risk at m is
/// the distance from e_m to a discretized reference, averaged over chains,
/// then over datasets. Throws RiskError.
RiskReport estimate_risk(const ExperimentConfig& config);

struct AuditResult {
  Index k = 0;
  Index m = 0;
  double risk_k = 0.0;
  double stderr_k = 0.0;
  double risk_m = 0.0;
  double stderr_m = 0.0;
  /// R_k + k/m + 3 (se_k + se_m) - R_m; the check passes iff >= 0.
  double margin = 0.0;
  bool pass = false;
  std::string config_hash;
};

/// R_m <= R_k + k/m with 3-sigma slack, both sides from the same chains.
/// Requires k <= m and a stationary start.
AuditResult subadditivity_audit(const ExperimentConfig& config, Index k, Index m);

void write_audit_csv(std::ostream& os, const std::vector<AuditResult>& results);

}  // namespace lcmc

#endif  // LCMC_HARNESS_HPP
