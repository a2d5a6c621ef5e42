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

#ifndef LCMC_ASYMPTOTICS_HPP
#define LCMC_ASYMPTOTICS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lcmc/linalg.hpp"
#include "lcmc/measures.hpp"
#include "lcmc/models.hpp"
#include "lcmc/rng.hpp"

namespace lcmc {

/// Fisher information of the observed data (I), the missing data (J) and the
/// complete data (K = I + J).
struct InfoTriple {
  MatrixXd info_i;
  MatrixXd info_j;
  MatrixXd info_k;

  static InfoTriple from_model(const AugmentationModel& model, const VectorXd& theta);
  /// Throws std::invalid_argument unless I, K are SPD, J symmetric and
  /// K = I + J to 1e-12 relative to the largest entry.
  void validate() const;
};

/// max-abs entry of I^-1 - B I^-1 B^T - (K^-1 + K^-1 J K^-1), B = K^-1 J.
/// Zero exactly when the Gaussian AR(1) surrogate leaves N(0, I^-1)
/// invariant.
double stationarity_identity_deviation(const InfoTriple& info);

/// Throws std::runtime_error when the deviation exceeds `tol`.
double stationarity_identity_check(const InfoTriple& info, double tol = 1e-10);

struct ScalarEstimate {
  double value = 0.0;
  std::optional<double> stderr_value;
};

/// int |sqrt p(x | theta + h) - sqrt p(x | theta) - h^T eta(x | theta)|^2 dx
/// with eta = (1/2) score * sqrt(p). One-dimensional models use adaptive
/// Gauss-Kronrod quadrature over the real line; otherwise Monte Carlo with
/// `mc_size` draws from N(theta, 4 I^-1). Throws std::runtime_error if the
/// quadrature does not converge.
ScalarEstimate qmd_residual(const AugmentationModel& model, const VectorXd& theta, const VectorXd& h,
                            RngStream* rng = nullptr, Index mc_size = 200000);

/// Draws of Z_n(y_n | x_n, theta) = n^-1/2 sum_i [score_joint(x_i, y_i) -
/// score_marginal(x_i)] over independent y_n ~ P_n(dy | x_n, theta), as
/// columns.
MatrixXd partial_score_draws(const AugmentationModel& model, const VectorXd& theta, const MatrixXd& x,
                             Index redraws, RngStream& rng);

struct PartialScoreSummary {
  /// Mean over datasets of the per-dataset empirical covariance.
  MatrixXd cov;
  /// Entrywise standard error across datasets.
  MatrixXd cov_stderr;
  VectorXd mean;
  VectorXd mean_stderr;
  int datasets = 0;
  Index redraws = 0;
};

/// `datasets` independent x_n ~ P_n(dx | theta), `redraws` (>= 1000) latent
/// redraws each.
PartialScoreSummary partial_score_covariance(const AugmentationModel& model, const VectorXd& theta,
                                             Index n, int datasets, Index redraws, std::uint64_t seed);

/// Exact total variation between the posterior of a fresh dataset and its
/// normal approximation N(theta_hat, n^-1 I(theta_hat)^-1), theta_hat the
/// posterior central value.
DistanceEstimate bvm_gap(const NormalAugmentationModel& model, const VectorXd& theta_true, Index n,
                         RngStream& rng);

struct SurrogateGapPoint {
  double u = 0.0;
  /// Localized two-sample distance between one-step Gibbs and surrogate laws.
  DistanceEstimate gap;
  /// Localized distance between two independent surrogate samples.
  double floor = 0.0;
};

/// One-step comparison of the Gibbs kernel with the Gaussian surrogate at
/// starts theta_hat + n^-1/2 u (u applied to every coordinate), for u in
/// `grid`.
std::vector<SurrogateGapPoint> kernel_surrogate_gap(const NormalAugmentationModel& model,
                                                    const VectorXd& theta_true, Index n,
                                                    const std::vector<double>& grid,
                                                    Index steps_per_point, std::uint64_t seed,
                                                    const TransportOptions& options = {});

struct EquivalenceSummary {
  double median = 0.0;
  double q90 = 0.0;
  double mean = 0.0;
  std::vector<double> values;
};

/// Distribution over `reps` (>= 50) datasets of sqrt(n) |theta_hat - theta_tilde|,
/// theta_tilde = theta + n^-1/2 I^-1 Z_n(x_n | theta) the one-step efficient
/// estimator.
EquivalenceSummary equivalent_statistics_gap(const AugmentationModel& model, const VectorXd& theta_true,
                                             Index n, int reps, std::uint64_t seed);

}  // namespace lcmc

#endif  // LCMC_ASYMPTOTICS_HPP
