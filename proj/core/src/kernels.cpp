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

#include "lcmc/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace lcmc {

ApproxGibbsKernel::ApproxGibbsKernel(VectorXd theta_hat, MatrixXd info_i, MatrixXd info_j,
                                     MatrixXd info_k, double n)
    : theta_hat_(std::move(theta_hat)), info_i_(std::move(info_i)), n_(n) {
  const Index p = theta_hat_.size();
  if (p == 0 || info_i_.rows() != p || info_j.rows() != p || info_k.rows() != p ||
      info_j.cols() != p || info_k.cols() != p) {
    throw std::invalid_argument("ApproxGibbsKernel: dimension mismatch");
  }
  if (!(n >= 1.0)) throw std::invalid_argument("ApproxGibbsKernel: n must be >= 1");
  require_spd(info_i_, "I");
  require_spd(info_k, "K");
  if (max_abs(info_j - info_j.transpose()) > kSymmetryTolerance * std::max(1.0, max_abs(info_j))) {
    throw std::invalid_argument("ApproxGibbsKernel: J is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(info_j, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, max_abs(info_j))) {
    throw std::invalid_argument("ApproxGibbsKernel: J is not positive semidefinite");
  }
  if (max_abs(info_k - info_i_ - info_j) > 1e-12 * std::max(1.0, max_abs(info_k))) {
    throw std::invalid_argument("ApproxGibbsKernel: K differs from I + J");
  }
  const MatrixXd k_inv = spd_inverse(info_k, "K");
  b_ = k_inv * info_j;
  innovation_cov_ = symmetrize((k_inv + k_inv * info_j * k_inv) / n_);
  innovation_chol_ = require_spd(innovation_cov_, "innovation covariance").matrixL();
}

VectorXd ApproxGibbsKernel::step(const VectorXd& theta, RngStream& rng) const {
  if (theta.size() != theta_hat_.size()) {
    throw std::invalid_argument("approx_gibbs_step: theta dimension mismatch");
  }
  return theta_hat_ + b_ * (theta - theta_hat_) + innovation_chol_ * rng.normal_vector(theta.size());
}

GaussianMeasure ApproxGibbsKernel::stationary_law() const {
  return GaussianMeasure(theta_hat_, spd_inverse(info_i_, "I") / n_);
}

MhResult mh_step(const MhKernel& kernel, const VectorXd& theta, RngStream& rng) {
  const double lt_from = kernel.log_target(theta);
  if (!std::isfinite(lt_from)) throw std::domain_error("mh_step: log target not finite at the current state");
  MhResult out;
  out.record.proposed = kernel.propose(theta, rng);
  const double lt_to = kernel.log_target(out.record.proposed);
  if (std::isnan(lt_to)) throw std::domain_error("mh_step: log target is NaN at the proposal");
  double alpha = 0.0;
  if (lt_to != -std::numeric_limits<double>::infinity()) {
    double log_r = lt_to - lt_from;
    if (kernel.log_proposal) {
      log_r += kernel.log_proposal(theta, out.record.proposed) -
               kernel.log_proposal(out.record.proposed, theta);
    }
    if (std::isnan(log_r)) throw std::domain_error("mh_step: acceptance ratio is NaN");
    alpha = log_r >= 0.0 ? 1.0 : std::exp(log_r);
  }
  out.record.alpha = alpha;
  out.record.uniform_draw = rng.uniform();
  out.record.accepted = out.record.uniform_draw <= alpha;
  out.next = out.record.accepted ? out.record.proposed : theta;
  return out;
}

GibbsResult gibbs_step(const AugmentationModel& model, const MatrixXd& x, const VectorXd& theta,
                       RngStream& rng) {
  GibbsResult out;
  out.latent = model.sample_latent(x, theta, rng);
  out.next = model.sample_posterior_full(x, out.latent, rng);
  return out;
}

VectorXd approx_gibbs_step(const ApproxGibbsKernel& kernel, const VectorXd& theta, RngStream& rng) {
  return kernel.step(theta, rng);
}

namespace {

struct ChainRunner {
  const VectorXd& initial;
  Index m;
  RngStream& rng;
  const RunOptions& options;
  ChainPath path;

  void start() {
    path.theta.resize(initial.size(), m);
    path.theta.col(0) = initial;
  }

  ChainPath operator()(const IidKernel& k) {
    start();
    for (Index i = 1; i < m; ++i) path.theta.col(i) = k.sample(rng);
    return std::move(path);
  }

  ChainPath operator()(const MhKernel& k) {
    start();
    VectorXd cur = initial;
    for (Index i = 1; i < m; ++i) {
      MhResult r = mh_step(k, cur, rng);
      if (options.mh_records != nullptr) options.mh_records->push_back(r.record);
      cur = std::move(r.next);
      path.theta.col(i) = cur;
    }
    return std::move(path);
  }

  ChainPath operator()(const GibbsKernel& k) {
    if (!k.model || !k.x) throw std::invalid_argument("run_chain: Gibbs kernel without model or data");
    start();
    VectorXd cur = initial;
    if (options.keep_latents) path.latents.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      if (i + 1 == m && !options.keep_latents) break;
      MatrixXd y = k.model->sample_latent(*k.x, cur, rng);
      if (i + 1 < m) {
        cur = k.model->sample_posterior_full(*k.x, y, rng);
        path.theta.col(i + 1) = cur;
      }
      if (options.keep_latents) path.latents.push_back(std::move(y));
    }
    return std::move(path);
  }

  ChainPath operator()(const ApproxGibbsKernel& k) {
    start();
    VectorXd cur = initial;
    for (Index i = 1; i < m; ++i) {
      cur = k.step(cur, rng);
      path.theta.col(i) = cur;
    }
    return std::move(path);
  }
};

}  // namespace

ChainPath run_chain(const TransitionKernelSpec& kernel, const VectorXd& initial, Index m,
                    RngStream& rng, const RunOptions& options) {
  if (m < 1) throw std::invalid_argument("run_chain: m must be >= 1");
  if (initial.size() == 0) throw std::invalid_argument("run_chain: empty initial state");
  ChainRunner runner{initial, m, rng, options, {}};
  return std::visit(runner, kernel);
}

LocalizationMap::LocalizationMap(VectorXd center, double scale)
    : theta_hat(std::move(center)), delta_n(scale) {
  if (!(delta_n > 0.0) || !std::isfinite(delta_n)) {
    throw std::invalid_argument("LocalizationMap: delta_n must be positive and finite");
  }
}

LocalizationMap LocalizationMap::root_n(VectorXd center, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("LocalizationMap: n must be positive");
  return LocalizationMap(std::move(center), 1.0 / std::sqrt(n));
}

WeightedSample localize(const WeightedSample& sample, const LocalizationMap& map) {
  if (sample.dim() != map.theta_hat.size()) throw std::invalid_argument("localize: dimension mismatch");
  MatrixXd pts = (sample.points().colwise() - map.theta_hat) / map.delta_n;
  return WeightedSample(std::move(pts), sample.weights());
}

WeightedSample delocalize(const WeightedSample& sample, const LocalizationMap& map) {
  if (sample.dim() != map.theta_hat.size()) throw std::invalid_argument("delocalize: dimension mismatch");
  MatrixXd pts = (sample.points() * map.delta_n).colwise() + map.theta_hat;
  return WeightedSample(std::move(pts), sample.weights());
}

GaussianMeasure localize(const GaussianMeasure& g, const LocalizationMap& map) {
  if (g.dim() != map.theta_hat.size()) throw std::invalid_argument("localize: dimension mismatch");
  return GaussianMeasure((g.mean() - map.theta_hat) / map.delta_n,
                         g.covariance() / (map.delta_n * map.delta_n));
}

VectorXd perturbed_start(const VectorXd& theta_tilde, double n, const GaussianMeasure& q_shape,
                         RngStream& rng) {
  if (!(n >= 1.0)) throw std::invalid_argument("perturbed_start: n must be >= 1");
  if (q_shape.dim() != theta_tilde.size()) {
    throw std::invalid_argument("perturbed_start: dimension mismatch");
  }
  return theta_tilde + q_shape.sample(rng) / std::sqrt(n);
}

}  // namespace lcmc
