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

#include "lcmc/models.hpp"

#include <cmath>
#include <numbers>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace lcmc {

namespace {

MatrixXd lower_cholesky(const MatrixXd& m, std::string_view what) {
  return require_spd(m, what).matrixL();
}

double gaussian_log_density(const VectorXd& r, const MatrixXd& chol) {
  const VectorXd z = chol.triangularView<Eigen::Lower>().solve(r);
  const double log_det = 2.0 * chol.diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(r.size()) * std::log(2.0 * std::numbers::pi) + log_det + z.squaredNorm());
}

}  // namespace

NormalAugmentationModel::NormalAugmentationModel(MatrixXd sigma_y, MatrixXd sigma_x,
                                                 VectorXd prior_mean, MatrixXd prior_cov)
    : sigma_y_(std::move(sigma_y)),
      sigma_x_(std::move(sigma_x)),
      prior_mean_(std::move(prior_mean)),
      prior_cov_(std::move(prior_cov)) {
  const Index p = prior_mean_.size();
  if (p == 0) throw std::invalid_argument("NormalAugmentationModel: empty prior mean");
  if (sigma_y_.rows() != p || sigma_x_.rows() != p || prior_cov_.rows() != p) {
    throw std::invalid_argument("NormalAugmentationModel: dimension mismatch");
  }
  chol_y_ = lower_cholesky(sigma_y_, "sigma_y");
  chol_x_ = lower_cholesky(sigma_x_, "sigma_x");
  require_spd(prior_cov_, "prior_cov");
  sigma_y_inv_ = spd_inverse(sigma_y_, "sigma_y");
  const MatrixXd sigma_x_inv = spd_inverse(sigma_x_, "sigma_x");
  prior_prec_ = spd_inverse(prior_cov_, "prior_cov");
  marginal_cov_ = symmetrize(sigma_y_ + sigma_x_);
  marginal_prec_ = spd_inverse(marginal_cov_, "sigma_y + sigma_x");
  latent_cov_ = spd_inverse(symmetrize(sigma_y_inv_ + sigma_x_inv), "latent precision");
  latent_theta_gain_ = latent_cov_ * sigma_y_inv_;
  latent_data_gain_ = latent_cov_ * sigma_x_inv;
  latent_chol_ = lower_cholesky(latent_cov_, "latent covariance");
}

std::string NormalAugmentationModel::prior_description() const {
  std::string out = "normal(mean=[";
  char buf[40];
  for (Index i = 0; i < dim(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", prior_mean_[i]);
    out += buf;
  }
  out += "], cov diag=[";
  for (Index i = 0; i < dim(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", prior_cov_(i, i));
    out += buf;
  }
  return out + "])";
}

Dataset NormalAugmentationModel::sample_data(const VectorXd& theta, Index n, RngStream& rng) const {
  if (n < 1) throw std::invalid_argument("sample_data: n must be >= 1");
  if (theta.size() != dim()) throw std::invalid_argument("sample_data: theta dimension mismatch");
  Dataset d;
  d.y = chol_y_ * rng.normal_matrix(dim(), n);
  d.y.colwise() += theta;
  d.x = d.y + chol_x_ * rng.normal_matrix(dim(), n);
  return d;
}

MatrixXd NormalAugmentationModel::sample_latent(const MatrixXd& x, const VectorXd& theta,
                                                RngStream& rng) const {
  if (x.rows() != dim() || theta.size() != dim()) {
    throw std::invalid_argument("sample_latent: dimension mismatch");
  }
  MatrixXd y = latent_data_gain_ * x + latent_chol_ * rng.normal_matrix(dim(), x.cols());
  y.colwise() += latent_theta_gain_ * theta;
  return y;
}

GaussianMeasure NormalAugmentationModel::latent_conditional(const VectorXd& xi,
                                                            const VectorXd& theta) const {
  return GaussianMeasure(latent_theta_gain_ * theta + latent_data_gain_ * xi, latent_cov_);
}

GaussianMeasure NormalAugmentationModel::posterior_full(const MatrixXd& y) const {
  if (y.rows() != dim() || y.cols() < 1) throw std::invalid_argument("posterior_full: bad latent shape");
  const double n = static_cast<double>(y.cols());
  const MatrixXd cov = spd_inverse(symmetrize(prior_prec_ + n * sigma_y_inv_), "full posterior precision");
  const VectorXd mean = cov * (prior_prec_ * prior_mean_ + sigma_y_inv_ * y.rowwise().sum());
  return GaussianMeasure(mean, cov);
}

GaussianMeasure NormalAugmentationModel::posterior_marginal(const MatrixXd& x) const {
  if (x.rows() != dim() || x.cols() < 1) throw std::invalid_argument("posterior_marginal: bad data shape");
  const double n = static_cast<double>(x.cols());
  const MatrixXd cov =
      spd_inverse(symmetrize(prior_prec_ + n * marginal_prec_), "marginal posterior precision");
  const VectorXd mean = cov * (prior_prec_ * prior_mean_ + marginal_prec_ * x.rowwise().sum());
  return GaussianMeasure(mean, cov);
}

VectorXd NormalAugmentationModel::sample_posterior_full(const MatrixXd& /*x*/, const MatrixXd& y,
                                                        RngStream& rng) const {
  return posterior_full(y).sample(rng);
}

VectorXd NormalAugmentationModel::sample_posterior_marginal(const MatrixXd& x, RngStream& rng) const {
  return posterior_marginal(x).sample(rng);
}

VectorXd NormalAugmentationModel::score_joint(const VectorXd& /*x*/, const VectorXd& y,
                                              const VectorXd& theta) const {
  return sigma_y_inv_ * (y - theta);
}

VectorXd NormalAugmentationModel::score_marginal(const VectorXd& x, const VectorXd& theta) const {
  return marginal_prec_ * (x - theta);
}

double NormalAugmentationModel::log_joint_density(const VectorXd& x, const VectorXd& y,
                                                  const VectorXd& theta) const {
  return gaussian_log_density(y - theta, chol_y_) + gaussian_log_density(x - y, chol_x_);
}

double NormalAugmentationModel::log_marginal_density(const VectorXd& x, const VectorXd& theta) const {
  return gaussian_log_density(x - theta, lower_cholesky(marginal_cov_, "marginal covariance"));
}

MatrixXd NormalAugmentationModel::info_marginal(const VectorXd& /*theta*/) const {
  return marginal_prec_;
}

MatrixXd NormalAugmentationModel::info_full(const VectorXd& /*theta*/) const { return sigma_y_inv_; }

VectorXd NormalAugmentationModel::point_estimate(const MatrixXd& x) const {
  if (x.cols() < 1) throw std::invalid_argument("point_estimate: empty data");
  return x.rowwise().mean();
}

VectorXd NormalAugmentationModel::posterior_center(const MatrixXd& x) const {
  return central_value(posterior_marginal(x));
}

QmdEstimate marginal_qmd_derivative(const NormalAugmentationModel& model, const VectorXd& x,
                                    const VectorXd& theta) {
  const double log_p = model.log_marginal_density(x, theta);
  if (!std::isfinite(log_p)) throw std::domain_error("marginal_qmd_derivative: p(x | theta) = 0");
  return {0.5 * std::exp(0.5 * log_p) * model.score_marginal(x, theta), VectorXd()};
}

QmdEstimate marginal_qmd_derivative_mc(const AugmentationModel& model, const VectorXd& x,
                                       const VectorXd& theta, const GaussianMeasure& proposal,
                                       Index draws, RngStream& rng, int batches) {
  if (batches < 2 || draws < batches) {
    throw std::invalid_argument("marginal_qmd_derivative_mc: need draws >= batches >= 2");
  }
  const Index p = theta.size();
  const Index per_batch = draws / batches;
  std::vector<VectorXd> batch_num;
  std::vector<double> batch_den;
  VectorXd num_total = VectorXd::Zero(p);
  double den_total = 0.0;
  for (int b = 0; b < batches; ++b) {
    VectorXd num = VectorXd::Zero(p);
    double den = 0.0;
    for (Index k = 0; k < per_batch; ++k) {
      const VectorXd y = proposal.sample(rng);
      const double ratio = std::exp(model.log_joint_density(x, y, theta) - proposal.log_density(y));
      num += ratio * model.score_joint(x, y, theta);
      den += ratio;
    }
    num_total += num;
    den_total += den;
    batch_num.push_back(num / static_cast<double>(per_batch));
    batch_den.push_back(den / static_cast<double>(per_batch));
  }
  const double total = static_cast<double>(per_batch) * batches;
  const double den_mean = den_total / total;
  if (!(den_mean > 0.0)) throw std::domain_error("marginal_qmd_derivative_mc: p(x | theta) = 0");
  QmdEstimate out;
  out.value = 0.5 * (num_total / total) / std::sqrt(den_mean);
  VectorXd ss = VectorXd::Zero(p);
  for (int b = 0; b < batches; ++b) {
    const VectorXd est = 0.5 * batch_num[static_cast<std::size_t>(b)] /
                         std::sqrt(batch_den[static_cast<std::size_t>(b)]);
    ss += (est - out.value).cwiseAbs2();
  }
  out.stderr_value = (ss / (batches - 1.0) / batches).cwiseSqrt();
  return out;
}

}  // namespace lcmc
