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

#ifndef LCMC_CONFIG_HPP
#define LCMC_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcmc/estimators.hpp"
#include "lcmc/linalg.hpp"

namespace lcmc {

/// Invalid configuration; carries the offending line (0 for command-line
/// overrides and defaults) and key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

enum class KernelKind { gibbs, approx_gibbs, mh, iid };
enum class StartMode { stationary, perturbed };
enum class DataMode { fixed, prior_predictive };
enum class ReferenceKind { posterior, bvm };

std::string to_string(KernelKind k);
std::string to_string(StartMode s);
std::string to_string(DataMode d);
std::string to_string(ReferenceKind r);

/// Experiment description. Matrix-valued keys accept a scalar s (s * I), p
/// diagonal entries or p*p row-major entries; vector-valued keys accept a
/// scalar (repeated) or p entries. Lists are comma separated.
struct ExperimentConfig {
  std::string model = "normal_augmentation";
  Index p = 1;
  MatrixXd sigma_y;
  MatrixXd sigma_x;
  VectorXd prior_mean;
  MatrixXd prior_cov;
  VectorXd theta_true;
  DataMode data_mode = DataMode::fixed;

  KernelKind kernel = KernelKind::gibbs;
  StartMode start = StartMode::stationary;
  /// Proposal covariance of the random-walk MH kernel, relative to the
  /// posterior covariance.
  double mh_scale = 1.0;
  /// Covariance inflation of the iid proposal relative to the posterior.
  double iid_scale = 1.0;

  std::vector<Index> n_grid{100};
  std::vector<Index> m_grid{1000};
  int replicates = 10;
  int chains_per_replicate = 1;

  EstimatorSpec estimator;
  bool localized = false;
  ReferenceKind reference = ReferenceKind::posterior;
  double truncation = 1.0;
  Index ref_size = 1000;
  std::uint64_t seed = 1;
  std::string output;
  /// Scenario for the `demo` subcommand (high_dim_is or shrinking_mh).
  std::string demo;

  /// Sorted key=value lines of every setting that affects results (all but
  /// `output`), in canonical number formatting.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;
};

/// Raw key/value pairs with their source lines.
struct ConfigEntries {
  std::map<std::string, std::pair<std::string, int>> values;
};

ConfigEntries parse_config_text(std::istream& is);
ConfigEntries parse_config_file(const std::string& path);
/// `key=value` overrides replace entries (line 0).
void apply_override(ConfigEntries& entries, const std::string& assignment);

/// Validates and converts. Throws ConfigError.
ExperimentConfig build_config(const ConfigEntries& entries);

/// Keys understood by build_config.
const std::vector<std::string>& config_keys();

}  // namespace lcmc

#endif  // LCMC_CONFIG_HPP
