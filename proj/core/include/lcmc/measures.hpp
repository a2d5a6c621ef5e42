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

#ifndef LCMC_MEASURES_HPP
#define LCMC_MEASURES_HPP

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lcmc/linalg.hpp"
#include "lcmc/rng.hpp"

/**
 * \file
 * \brief Finite measures on R^p and distances between them.
 *
 * The bounded-Lipschitz distance is realized as optimal transport with the
 * truncated ground cost min(|x - y|, truncation). With truncation 1 every
 * distance is at most 1.
 */

namespace lcmc {

/// Truncation level meaning "no truncation" (plain Wasserstein-1).
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Tolerance on the total mass for a sample to count as normalized.
inline constexpr double kNormalizedTolerance = 1e-12;

/// Finite weighted point cloud. Points are stored column-wise (dim x size).
class WeightedSample {
 public:
  /// Throws std::invalid_argument on empty input, size mismatch, negative or
  /// non-finite weights, or non-finite points.
  WeightedSample(MatrixXd points, VectorXd weights);

  /// Uniform weights 1/size on the columns of `points`.
  static WeightedSample uniform(MatrixXd points);
  static WeightedSample point_mass(const VectorXd& x);
  /// Convenience for 1D clouds.
  static WeightedSample from_1d(const std::vector<double>& xs, const std::vector<double>& ws);

  Index dim() const noexcept { return points_.rows(); }
  Index size() const noexcept { return points_.cols(); }
  const MatrixXd& points() const noexcept { return points_; }
  const VectorXd& weights() const noexcept { return weights_; }
  auto point(Index i) const { return points_.col(i); }
  double weight(Index i) const { return weights_[i]; }

  double total_mass() const noexcept { return mass_; }
  bool normalized() const noexcept { return normalized_; }

  /// Equal points merged (weights summed) and sorted lexicographically.
  WeightedSample merged() const;
  WeightedSample translated(const VectorXd& shift) const;
  /// Weights divided by the total mass. Throws when the mass is zero.
  WeightedSample renormalized() const;

 private:
  MatrixXd points_;
  VectorXd weights_;
  double mass_ = 0.0;
  bool normalized_ = false;
};

class GaussianMeasure {
 public:
  /// Throws std::invalid_argument unless covariance is SPD and dims agree.
  GaussianMeasure(VectorXd mean, MatrixXd covariance);

  static GaussianMeasure standard(Index p);

  Index dim() const noexcept { return mean_.size(); }
  const VectorXd& mean() const noexcept { return mean_; }
  const MatrixXd& covariance() const noexcept { return covariance_; }
  /// Lower Cholesky factor of the covariance.
  const MatrixXd& cholesky() const noexcept { return chol_; }

  VectorXd sample(RngStream& rng) const;
  /// `count` independent draws as columns.
  MatrixXd sample(Index count, RngStream& rng) const;
  double log_density(const VectorXd& x) const;

 private:
  VectorXd mean_;
  MatrixXd covariance_;
  MatrixXd chol_;
  double log_norm_ = 0.0;
};

enum class DistanceMethod { exact_1d, exact_lp, sampled, monte_carlo };

std::string to_string(DistanceMethod method);

struct DistanceEstimate {
  double value = 0.0;
  DistanceMethod method = DistanceMethod::exact_1d;
  /// Absent for exact methods.
  std::optional<double> stderr_value;
};

struct TransportOptions {
  /// Ground cost is min(|x - y|, truncation); kUnbounded disables truncation.
  double truncation = 1.0;
  /// Combined support cap for the exact solver when dim >= 2.
  Index lp_support_cap = 4096;
};

/// Optimal transport distance with truncated Euclidean ground cost.
///
/// In one dimension the problem is solved exactly in O(N log N) as a
/// min-cost flow on the sorted support; in higher dimension by an exact
/// transportation simplex, which refuses combined supports above
/// `lp_support_cap` (the caller must subsample).
///
/// Throws std::invalid_argument on dimension mismatch, unnormalized input
/// (mass off by more than 1e-9) or an oversized support.
DistanceEstimate w1_truncated(const WeightedSample& a, const WeightedSample& b,
                              const TransportOptions& options = {});

/// Distance from `a` to a Gaussian, discretized by `ref_size` exact draws.
/// The reported value is the mean over `redraws` (>= 2) independent
/// discretizations and the stderr is their standard error.
DistanceEstimate w1_to_gaussian(const WeightedSample& a, const GaussianMeasure& g,
                                Index ref_size, RngStream& rng,
                                const TransportOptions& options = {}, int redraws = 2);

/// Total variation distance. Exact in one dimension; for dim >= 2 a Monte
/// Carlo estimate of (1/2) E_{g1} |1 - dg2/dg1| over `mc_size` draws.
DistanceEstimate tv_gaussians(const GaussianMeasure& g1, const GaussianMeasure& g2,
                              RngStream& rng, Index mc_size = 100000);

/// Coordinatewise root of sum_i w_i atan(x_i - c) = 0.
VectorXd central_value(const WeightedSample& a);

/// Central value of a Gaussian, from a symmetric Gauss-Hermite discretization
/// of each marginal.
VectorXd central_value(const GaussianMeasure& g);

/// CSV form: header `dim,<p>` then one row `w,x1,...,xp` per point, 17
/// significant digits.
void write_csv(std::ostream& os, const WeightedSample& sample);
WeightedSample read_csv(std::istream& is);

/// Standard normal density and distribution function.
double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace lcmc

#endif  // LCMC_MEASURES_HPP
