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

#ifndef LCMC_MODELS_HPP
#define LCMC_MODELS_HPP

#include <memory>
#include <string>

#include "lcmc/linalg.hpp"
#include "lcmc/measures.hpp"
#include "lcmc/rng.hpp"

namespace lcmc {

/// Observed data x_n together with the latent y_n that generated it.
/// Observations are stored column-wise (p x n).
struct Dataset {
  MatrixXd x;
  MatrixXd y;
};

/// Data-augmentation model: complete data (x, y) with parameter theta, a
/// prior, and samplers for every conditional the Gibbs sampler needs.
///
/// `x` and `y` arguments are p x n matrices of i.i.d. observations; scores and
/// densities take a single observation.
class AugmentationModel {
 public:
  virtual ~AugmentationModel() = default;

  virtual Index dim() const = 0;
  virtual std::string name() const = 0;
  virtual std::string prior_description() const = 0;

  virtual Dataset sample_data(const VectorXd& theta, Index n, RngStream& rng) const = 0;
  /// y_n ~ P_n(dy | x_n, theta).
  virtual MatrixXd sample_latent(const MatrixXd& x, const VectorXd& theta, RngStream& rng) const = 0;
  /// theta ~ P_n(dtheta | x_n, y_n).
  virtual VectorXd sample_posterior_full(const MatrixXd& x, const MatrixXd& y,
                                         RngStream& rng) const = 0;
  /// theta ~ P_n(dtheta | x_n).
  virtual VectorXd sample_posterior_marginal(const MatrixXd& x, RngStream& rng) const = 0;

  /// Score of the complete-data density p(x, y | theta).
  virtual VectorXd score_joint(const VectorXd& x, const VectorXd& y, const VectorXd& theta) const = 0;
  /// Score of the observed-data density p(x | theta).
  virtual VectorXd score_marginal(const VectorXd& x, const VectorXd& theta) const = 0;
  virtual double log_joint_density(const VectorXd& x, const VectorXd& y,
                                   const VectorXd& theta) const = 0;
  virtual double log_marginal_density(const VectorXd& x, const VectorXd& theta) const = 0;

  /// Observed-data Fisher information I(theta).
  virtual MatrixXd info_marginal(const VectorXd& theta) const = 0;
  /// Complete-data Fisher information K(theta).
  virtual MatrixXd info_full(const VectorXd& theta) const = 0;
  /// Missing information J = K - I.
  MatrixXd info_latent(const VectorXd& theta) const { return info_full(theta) - info_marginal(theta); }

  /// Efficient frequentist estimate from x_n (the MLE).
  virtual VectorXd point_estimate(const MatrixXd& x) const = 0;
  /// Central value of the posterior P_n(dtheta | x_n).
  virtual VectorXd posterior_center(const MatrixXd& x) const = 0;
};

/// y ~ N(theta, Sigma_y), x | y ~ N(y, Sigma_x), prior theta ~ N(mu_0, Lambda_0).
///
/// Every conditional is Gaussian, so the posterior, the Fisher matrices
/// I = (Sigma_y + Sigma_x)^-1, K = Sigma_y^-1 and the Gibbs autoregression are
/// all available in closed form.
class NormalAugmentationModel final : public AugmentationModel {
 public:
  NormalAugmentationModel(MatrixXd sigma_y, MatrixXd sigma_x, VectorXd prior_mean, MatrixXd prior_cov);

  Index dim() const override { return prior_mean_.size(); }
  std::string name() const override { return "normal_augmentation"; }
  std::string prior_description() const override;

  Dataset sample_data(const VectorXd& theta, Index n, RngStream& rng) const override;
  MatrixXd sample_latent(const MatrixXd& x, const VectorXd& theta, RngStream& rng) const override;
  VectorXd sample_posterior_full(const MatrixXd& x, const MatrixXd& y, RngStream& rng) const override;
  VectorXd sample_posterior_marginal(const MatrixXd& x, RngStream& rng) const override;

  VectorXd score_joint(const VectorXd& x, const VectorXd& y, const VectorXd& theta) const override;
  VectorXd score_marginal(const VectorXd& x, const VectorXd& theta) const override;
  double log_joint_density(const VectorXd& x, const VectorXd& y, const VectorXd& theta) const override;
  double log_marginal_density(const VectorXd& x, const VectorXd& theta) const override;

  MatrixXd info_marginal(const VectorXd& theta) const override;
  MatrixXd info_full(const VectorXd& theta) const override;

  VectorXd point_estimate(const MatrixXd& x) const override;
  VectorXd posterior_center(const MatrixXd& x) const override;

  /// Law of a single latent y^i given x^i and theta: the mean is
  /// latent_theta_gain() * theta + latent_data_gain() * x^i.
  GaussianMeasure latent_conditional(const VectorXd& xi, const VectorXd& theta) const;
  const MatrixXd& latent_theta_gain() const { return latent_theta_gain_; }
  const MatrixXd& latent_data_gain() const { return latent_data_gain_; }
  const MatrixXd& latent_cov() const { return latent_cov_; }

  GaussianMeasure posterior_full(const MatrixXd& y) const;
  GaussianMeasure posterior_marginal(const MatrixXd& x) const;
  GaussianMeasure prior() const { return GaussianMeasure(prior_mean_, prior_cov_); }

  const MatrixXd& sigma_y() const { return sigma_y_; }
  const MatrixXd& sigma_x() const { return sigma_x_; }

 private:
  MatrixXd sigma_y_;
  MatrixXd sigma_x_;
  VectorXd prior_mean_;
  MatrixXd prior_cov_;
  MatrixXd sigma_y_inv_;
  MatrixXd prior_prec_;
  MatrixXd marginal_cov_;
  MatrixXd marginal_prec_;
  MatrixXd chol_y_;
  MatrixXd chol_x_;
  MatrixXd latent_theta_gain_;
  MatrixXd latent_data_gain_;
  MatrixXd latent_cov_;
  MatrixXd latent_chol_;
};

struct QmdEstimate {
  VectorXd value;
  /// Per-coordinate standard error; empty for closed forms.
  VectorXd stderr_value;
};

/// Quadratic-mean derivative eta(x | theta) of the root marginal density,
/// eta = (1/2) score_marginal * sqrt(p(x | theta)).
QmdEstimate marginal_qmd_derivative(const NormalAugmentationModel& model, const VectorXd& x,
                                    const VectorXd& theta);

/// Monte Carlo evaluation of eta(x | theta) = int eta(xy | theta)
/// sqrt(p(xy | theta) / p(x | theta)) dy for a general model, using only the
/// complete-data density and score. Latents are drawn from `proposal`;
/// p(x | theta) is estimated from the same draws. The stderr comes from
/// `batches` batch means.
QmdEstimate marginal_qmd_derivative_mc(const AugmentationModel& model, const VectorXd& x,
                                       const VectorXd& theta, const GaussianMeasure& proposal,
                                       Index draws, RngStream& rng, int batches = 20);

}  // namespace lcmc

#endif  // LCMC_MODELS_HPP
