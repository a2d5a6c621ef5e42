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

#include "lcmc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lcmc/kernels.hpp"

namespace lcmc {

InfoTriple InfoTriple::from_model(const AugmentationModel& model, const VectorXd& theta) {
  InfoTriple t{model.info_marginal(theta), MatrixXd(), model.info_full(theta)};
  t.info_j = t.info_k - t.info_i;
  return t;
}

void InfoTriple::validate() const {
  require_spd(info_i, "I");
  require_spd(info_k, "K");
  if (info_j.rows() != info_i.rows() || info_j.cols() != info_i.cols()) {
    throw std::invalid_argument("InfoTriple: J has the wrong shape");
  }
  const double scale = std::max(1.0, max_abs(info_k));
  if (max_abs(info_j - info_j.transpose()) > kSymmetryTolerance * scale) {
    throw std::invalid_argument("InfoTriple: J is not symmetric");
  }
  if (max_abs(info_k - info_i - info_j) > 1e-12 * scale) {
    throw std::invalid_argument("InfoTriple: K differs from I + J");
  }
}

double stationarity_identity_deviation(const InfoTriple& info) {
  info.validate();
  const MatrixXd i_inv = spd_inverse(info.info_i, "I");
  const MatrixXd k_inv = spd_inverse(info.info_k, "K");
  const MatrixXd b = k_inv * info.info_j;
  const MatrixXd lhs = i_inv - b * i_inv * b.transpose();
  const MatrixXd rhs = k_inv + k_inv * info.info_j * k_inv;
  return max_abs(lhs - rhs);
}

double stationarity_identity_check(const InfoTriple& info, double tol) {
  const double dev = stationarity_identity_deviation(info);
  if (!(dev <= tol)) {
    throw std::runtime_error("stationarity identity violated: deviation " + std::to_string(dev));
  }
  return dev;
}

ScalarEstimate qmd_residual(const AugmentationModel& model, const VectorXd& theta, const VectorXd& h,
                            RngStream* rng, Index mc_size) {
  if (theta.size() != model.dim() || h.size() != model.dim()) {
    throw std::invalid_argument("qmd_residual: dimension mismatch");
  }
  if (h.isZero(0.0)) return {0.0, std::nullopt};
  const VectorXd shifted = theta + h;
  auto integrand = [&](const VectorXd& x) {
    const double root0 = std::exp(0.5 * model.log_marginal_density(x, theta));
    const double root1 = std::exp(0.5 * model.log_marginal_density(x, shifted));
    const double lin = 0.5 * root0 * h.dot(model.score_marginal(x, theta));
    const double r = root1 - root0 - lin;
    return r * r;
  };

  if (model.dim() == 1) {
    VectorXd x(1);
    auto f = [&](double t) {
      x[0] = t;
      return integrand(x);
    };
    double error = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -inf, inf, 15, 1e-12, &error);
    if (!std::isfinite(value) || error > 1e-6 * std::max(value, 1e-300) + 1e-18) {
      throw std::runtime_error("qmd_residual: quadrature did not converge");
    }
    return {value, std::nullopt};
  }

  if (rng == nullptr) throw std::invalid_argument("qmd_residual: Monte Carlo path needs a stream");
  if (mc_size < 2) throw std::invalid_argument("qmd_residual: mc_size must be >= 2");
  const GaussianMeasure q(theta, 4.0 * spd_inverse(model.info_marginal(theta), "I"));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Index k = 0; k < mc_size; ++k) {
    const VectorXd x = q.sample(*rng);
    const double t = integrand(x) / std::exp(q.log_density(x));
    sum += t;
    sum_sq += t * t;
  }
  const double n = static_cast<double>(mc_size);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

MatrixXd partial_score_draws(const AugmentationModel& model, const VectorXd& theta, const MatrixXd& x,
                             Index redraws, RngStream& rng) {
  const Index p = model.dim();
  const Index n = x.cols();
  if (x.rows() != p || theta.size() != p || n < 1) {
    throw std::invalid_argument("partial_score_draws: dimension mismatch");
  }
  VectorXd marginal_sum = VectorXd::Zero(p);
  for (Index i = 0; i < n; ++i) marginal_sum += model.score_marginal(x.col(i), theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  MatrixXd out(p, redraws);
  for (Index r = 0; r < redraws; ++r) {
    const MatrixXd y = model.sample_latent(x, theta, rng);
    VectorXd joint_sum = VectorXd::Zero(p);
    for (Index i = 0; i < n; ++i) joint_sum += model.score_joint(x.col(i), y.col(i), theta);
    out.col(r) = scale * (joint_sum - marginal_sum);
  }
  return out;
}

PartialScoreSummary partial_score_covariance(const AugmentationModel& model, const VectorXd& theta,
                                             Index n, int datasets, Index redraws, std::uint64_t seed) {
  if (redraws < 1000) throw std::invalid_argument("partial_score_covariance: redraws must be >= 1000");
  if (datasets < 2) throw std::invalid_argument("partial_score_covariance: datasets must be >= 2");
  const Index p = model.dim();
  std::vector<MatrixXd> covs;
  std::vector<VectorXd> means;
  for (int d = 0; d < datasets; ++d) {
    const auto tag = static_cast<std::uint64_t>(d);
    RngStream data_rng = RngStream::derive(seed, Purpose::data, {tag});
    RngStream draw_rng = RngStream::derive(seed, Purpose::check, {tag});
    const Dataset data = model.sample_data(theta, n, data_rng);
    const MatrixXd z = partial_score_draws(model, theta, data.x, redraws, draw_rng);
    const VectorXd mu = z.rowwise().mean();
    const MatrixXd centered = z.colwise() - mu;
    covs.push_back(centered * centered.transpose() / static_cast<double>(redraws - 1));
    means.push_back(mu);
  }
  const double k = static_cast<double>(datasets);
  PartialScoreSummary s;
  s.datasets = datasets;
  s.redraws = redraws;
  s.cov = MatrixXd::Zero(p, p);
  s.mean = VectorXd::Zero(p);
  for (int d = 0; d < datasets; ++d) {
    s.cov += covs[static_cast<std::size_t>(d)];
    s.mean += means[static_cast<std::size_t>(d)];
  }
  s.cov /= k;
  s.mean /= k;
  MatrixXd cov_ss = MatrixXd::Zero(p, p);
  VectorXd mean_ss = VectorXd::Zero(p);
  for (int d = 0; d < datasets; ++d) {
    cov_ss += (covs[static_cast<std::size_t>(d)] - s.cov).cwiseAbs2();
    mean_ss += (means[static_cast<std::size_t>(d)] - s.mean).cwiseAbs2();
  }
  s.cov_stderr = (cov_ss / (k - 1.0) / k).cwiseSqrt();
  s.mean_stderr = (mean_ss / (k - 1.0) / k).cwiseSqrt();
  return s;
}

DistanceEstimate bvm_gap(const NormalAugmentationModel& model, const VectorXd& theta_true, Index n,
                         RngStream& rng) {
  if (n < 2) throw std::invalid_argument("bvm_gap: n must be >= 2");
  const Dataset data = model.sample_data(theta_true, n, rng);
  const GaussianMeasure post = model.posterior_marginal(data.x);
  const VectorXd theta_hat = central_value(post);
  const GaussianMeasure approx(theta_hat,
                               spd_inverse(model.info_marginal(theta_hat), "I") / static_cast<double>(n));
  return tv_gaussians(post, approx, rng);
}

std::vector<SurrogateGapPoint> kernel_surrogate_gap(const NormalAugmentationModel& model,
                                                    const VectorXd& theta_true, Index n,
                                                    const std::vector<double>& grid,
                                                    Index steps_per_point, std::uint64_t seed,
                                                    const TransportOptions& options) {
  if (steps_per_point < 1000) {
    throw std::invalid_argument("kernel_surrogate_gap: steps_per_point must be >= 1000");
  }
  const auto n_tag = static_cast<std::uint64_t>(n);
  RngStream data_rng = RngStream::derive(seed, Purpose::data, {n_tag});
  const Dataset data = model.sample_data(theta_true, n, data_rng);
  const VectorXd theta_hat = model.posterior_center(data.x);
  const InfoTriple info = InfoTriple::from_model(model, theta_hat);
  const ApproxGibbsKernel approx(theta_hat, info.info_i, info.info_j, info.info_k,
                                 static_cast<double>(n));
  const LocalizationMap map = LocalizationMap::root_n(theta_hat, static_cast<double>(n));
  const Index p = model.dim();

  std::vector<SurrogateGapPoint> out;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto g_tag = static_cast<std::uint64_t>(g);
    const VectorXd start = map.invert(VectorXd::Constant(p, grid[g]));
    RngStream gibbs_rng = RngStream::derive(seed, Purpose::chain, {n_tag, g_tag, 0});
    RngStream approx_rng = RngStream::derive(seed, Purpose::chain, {n_tag, g_tag, 1});
    RngStream floor_rng = RngStream::derive(seed, Purpose::floor, {n_tag, g_tag});
    MatrixXd gibbs_pts(p, steps_per_point);
    MatrixXd approx_pts(p, steps_per_point);
    MatrixXd floor_pts(p, steps_per_point);
    for (Index s = 0; s < steps_per_point; ++s) {
      gibbs_pts.col(s) = gibbs_step(model, data.x, start, gibbs_rng).next;
      approx_pts.col(s) = approx.step(start, approx_rng);
      floor_pts.col(s) = approx.step(start, floor_rng);
    }
    const WeightedSample a = localize(WeightedSample::uniform(std::move(gibbs_pts)), map);
    const WeightedSample b = localize(WeightedSample::uniform(std::move(approx_pts)), map);
    const WeightedSample c = localize(WeightedSample::uniform(std::move(floor_pts)), map);
    SurrogateGapPoint pt;
    pt.u = grid[g];
    pt.gap = w1_truncated(a, b, options);
    pt.floor = w1_truncated(c, b, options).value;
    out.push_back(pt);
  }
  return out;
}

EquivalenceSummary equivalent_statistics_gap(const AugmentationModel& model, const VectorXd& theta_true,
                                             Index n, int reps, std::uint64_t seed) {
  if (reps < 50) throw std::invalid_argument("equivalent_statistics_gap: reps must be >= 50");
  const Index p = model.dim();
  const MatrixXd i_inv = spd_inverse(model.info_marginal(theta_true), "I");
  const double root_n = std::sqrt(static_cast<double>(n));
  EquivalenceSummary s;
  for (int r = 0; r < reps; ++r) {
    RngStream rng = RngStream::derive(seed, Purpose::data, {static_cast<std::uint64_t>(n),
                                                            static_cast<std::uint64_t>(r)});
    const Dataset data = model.sample_data(theta_true, n, rng);
    VectorXd z = VectorXd::Zero(p);
    for (Index i = 0; i < n; ++i) z += model.score_marginal(data.x.col(i), theta_true);
    z /= root_n;
    const VectorXd theta_tilde = theta_true + i_inv * z / root_n;
    const VectorXd theta_hat = model.posterior_center(data.x);
    s.values.push_back(root_n * (theta_hat - theta_tilde).norm());
  }
  std::vector<double> sorted = s.values;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  s.median = quantile(0.5);
  s.q90 = quantile(0.9);
  double sum = 0.0;
  for (double v : s.values) sum += v;
  s.mean = sum / static_cast<double>(reps);
  return s;
}

}  // namespace lcmc
