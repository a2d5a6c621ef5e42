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

#ifndef LCMC_KERNELS_HPP
#define LCMC_KERNELS_HPP

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "lcmc/estimators.hpp"
#include "lcmc/linalg.hpp"
#include "lcmc/measures.hpp"
#include "lcmc/models.hpp"
#include "lcmc/rng.hpp"

namespace lcmc {

/// Independent draws from a fixed sampler (crude Monte Carlo).
struct IidKernel {
  std::function<VectorXd(RngStream&)> sample;
};

/// Metropolis-Hastings. `log_proposal(to, from)` is log q(from, to); it may be
/// left empty for symmetric proposals.
struct MhKernel {
  std::function<double(const VectorXd&)> log_target;
  std::function<VectorXd(const VectorXd& from, RngStream&)> propose;
  std::function<double(const VectorXd& to, const VectorXd& from)> log_proposal;
};

/// Standard two-block Gibbs sampler of a data-augmentation model.
struct GibbsKernel {
  std::shared_ptr<const AugmentationModel> model;
  std::shared_ptr<const MatrixXd> x;
};

/// Gaussian AR(1) surrogate of the Gibbs theta-chain:
/// theta' ~ N(theta_hat + B (theta - theta_hat), n^-1 (K^-1 + K^-1 J K^-1)),
/// B = K^-1 J, whose stationary law is N(theta_hat, n^-1 I^-1).
class ApproxGibbsKernel {
 public:
  /// Throws std::invalid_argument unless I and K are SPD, J is symmetric
  /// PSD, K = I + J to 1e-12 (relative), dimensions agree and n >= 1.
  ApproxGibbsKernel(VectorXd theta_hat, MatrixXd info_i, MatrixXd info_j, MatrixXd info_k, double n);

  VectorXd step(const VectorXd& theta, RngStream& rng) const;

  const MatrixXd& autoregression() const noexcept { return b_; }
  /// Innovation covariance n^-1 (K^-1 + K^-1 J K^-1).
  const MatrixXd& innovation_cov() const noexcept { return innovation_cov_; }
  GaussianMeasure stationary_law() const;
  const VectorXd& theta_hat() const noexcept { return theta_hat_; }
  double n() const noexcept { return n_; }

 private:
  VectorXd theta_hat_;
  MatrixXd info_i_;
  double n_;
  MatrixXd b_;
  MatrixXd innovation_cov_;
  MatrixXd innovation_chol_;
};

using TransitionKernelSpec = std::variant<IidKernel, MhKernel, GibbsKernel, ApproxGibbsKernel>;

struct MHStepRecord {
  VectorXd proposed;
  double uniform_draw = 0.0;
  bool accepted = false;
  double alpha = 0.0;
};

struct MhResult {
  VectorXd next;
  MHStepRecord record;
};

/// One Metropolis-Hastings transition, acceptance computed in log space.
/// A proposal with log target -inf has alpha = 0. Throws std::domain_error
/// if the current state has non-finite log target or any term is NaN.
MhResult mh_step(const MhKernel& kernel, const VectorXd& theta, RngStream& rng);

struct GibbsResult {
  MatrixXd latent;
  VectorXd next;
};

/// y ~ P(dy | x, theta), then theta' ~ P(dtheta | x, y).
GibbsResult gibbs_step(const AugmentationModel& model, const MatrixXd& x, const VectorXd& theta,
                       RngStream& rng);

VectorXd approx_gibbs_step(const ApproxGibbsKernel& kernel, const VectorXd& theta, RngStream& rng);

struct RunOptions {
  /// Gibbs only: store y(i) ~ P(dy | x, theta(i)) for every state.
  bool keep_latents = false;
  /// MH only: receives one record per transition when non-null.
  std::vector<MHStepRecord>* mh_records = nullptr;
};

/// theta(0) = initial and m - 1 transitions. Deterministic in (kernel,
/// initial, m, stream).
ChainPath run_chain(const TransitionKernelSpec& kernel, const VectorXd& initial, Index m,
                    RngStream& rng, const RunOptions& options = {});

/// theta -> (theta - theta_hat) / delta_n.
struct LocalizationMap {
  VectorXd theta_hat;
  double delta_n = 1.0;

  LocalizationMap(VectorXd center, double scale);
  /// delta_n = n^-1/2.
  static LocalizationMap root_n(VectorXd center, double n);

  VectorXd apply(const VectorXd& theta) const { return (theta - theta_hat) / delta_n; }
  VectorXd invert(const VectorXd& u) const { return theta_hat + delta_n * u; }
};

WeightedSample localize(const WeightedSample& sample, const LocalizationMap& map);
WeightedSample delocalize(const WeightedSample& sample, const LocalizationMap& map);
/// Image of N(mu, S) under the map: N((mu - theta_hat) / delta_n, S / delta_n^2).
GaussianMeasure localize(const GaussianMeasure& g, const LocalizationMap& map);

/// theta_tilde + n^-1/2 * (draw from q_shape).
VectorXd perturbed_start(const VectorXd& theta_tilde, double n, const GaussianMeasure& q_shape,
                         RngStream& rng);

}  // namespace lcmc

#endif  // LCMC_KERNELS_HPP
