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

#include "lcmc/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lcmc/asymptotics.hpp"
#include "lcmc/demos.hpp"
#include "lcmc/harness.hpp"
#include "lcmc/kernels.hpp"
#include "lcmc/transport.hpp"

namespace lcmc {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CheckResult at_most(std::string name, double stat, double threshold) {
  return {std::move(name), stat, threshold, stat <= threshold};
}

// Largest successive difference; negative iff strictly decreasing.
double max_step(const std::vector<double>& v) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) worst = std::max(worst, v[i + 1] - v[i]);
  return worst;
}

CheckResult strictly_decreasing(std::string name, const std::vector<double>& v) {
  const double s = max_step(v);
  return {std::move(name), s, 0.0, s < 0.0};
}

MatrixXd random_spd(Index p, RngStream& rng, double ridge) {
  const MatrixXd a = rng.normal_matrix(p, p);
  return symmetrize(a * a.transpose()) + ridge * MatrixXd::Identity(p, p);
}

double max_z(const MatrixXd& value, const MatrixXd& target, const MatrixXd& se) {
  double worst = 0.0;
  for (Index i = 0; i < value.rows(); ++i) {
    for (Index j = 0; j < value.cols(); ++j) {
      const double d = std::abs(value(i, j) - target(i, j));
      worst = std::max(worst, se(i, j) > 0.0 ? d / se(i, j) : (d > 0.0 ? INFINITY : 0.0));
    }
  }
  return worst;
}

// Mean and standard error of each entry of v v^T (or of v itself) over the
// columns of `draws`.
void moment_z(const MatrixXd& draws, MatrixXd& mean, MatrixXd& se, bool second) {
  const Index p = draws.rows();
  const double n = static_cast<double>(draws.cols());
  const Index cols = second ? p : 1;
  mean = MatrixXd::Zero(p, cols);
  MatrixXd sq = MatrixXd::Zero(p, cols);
  for (Index k = 0; k < draws.cols(); ++k) {
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < cols; ++j) {
        const double t = second ? draws(i, k) * draws(j, k) : draws(i, k);
        mean(i, j) += t;
        sq(i, j) += t * t;
      }
    }
  }
  mean /= n;
  se = ((sq / n - mean.cwiseAbs2()).cwiseMax(0.0) / (n - 1.0)).cwiseSqrt();
}

}  // namespace

std::vector<CheckResult> run_check_suite(const ExperimentConfig& config) {
  std::vector<CheckResult> out;
  const auto model = make_model(config);
  const VectorXd theta = config.theta_true;
  const Index p = model->dim();
  const std::uint64_t seed = config.seed;

  {
    RngStream rng = RngStream::derive(seed, Purpose::check, {1});
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Index q = 1 + t % 4;
      InfoTriple info;
      info.info_i = random_spd(q, rng, 0.1);
      info.info_j = random_spd(q, rng, 0.0);
      info.info_k = info.info_i + info.info_j;
      worst = std::max(worst, stationarity_identity_deviation(info));
    }
    out.push_back(at_most("stationarity_identity_max_dev", worst, 1e-10));
  }

  {
    const InfoTriple info = InfoTriple::from_model(*model, theta);
    out.push_back(at_most("info_split_max_dev",
                          max_abs(info.info_k - info.info_i - model->info_latent(theta)), 1e-12));
  }

  {
    RngStream rng = RngStream::derive(seed, Purpose::check, {2});
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const int na = 1 + t % 6;
      const int nb = 1 + (t / 6) % 6;
      std::vector<double> xa(static_cast<std::size_t>(na));
      std::vector<double> xb(static_cast<std::size_t>(nb));
      VectorXd wa(na);
      VectorXd wb(nb);
      for (int i = 0; i < na; ++i) {
        xa[static_cast<std::size_t>(i)] = 1.5 * rng.normal();
        wa[i] = rng.uniform();
      }
      for (int i = 0; i < nb; ++i) {
        xb[static_cast<std::size_t>(i)] = 1.5 * rng.normal();
        wb[i] = rng.uniform();
      }
      wa /= wa.sum();
      wb /= wb.sum();
      MatrixXd cost(na, nb);
      for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
          cost(i, j) = std::min(std::abs(xa[static_cast<std::size_t>(i)] - xb[static_cast<std::size_t>(j)]), 1.0);
        }
      }
      const double line = transport::line_w1(xa, {wa.data(), static_cast<std::size_t>(na)}, xb,
                                             {wb.data(), static_cast<std::size_t>(nb)}, 1.0);
      worst = std::max(worst, std::abs(line - transport::transportation_cost(cost, wa, wb)));
    }
    out.push_back(at_most("transport_routes_max_dev", worst, 1e-9));
  }

  {
    RngStream rng = RngStream::derive(seed, Purpose::check, {3});
    const Index draws = 100000;
    MatrixXd marginal(p, draws);
    MatrixXd joint(p, draws);
    for (Index k = 0; k < draws; ++k) {
      const Dataset d = model->sample_data(theta, 1, rng);
      marginal.col(k) = model->score_marginal(d.x.col(0), theta);
      joint.col(k) = model->score_joint(d.x.col(0), d.y.col(0), theta);
    }
    MatrixXd mean;
    MatrixXd se;
    moment_z(marginal, mean, se, false);
    out.push_back(at_most("score_marginal_mean_z", max_z(mean, MatrixXd::Zero(p, 1), se), 3.0));
    moment_z(marginal, mean, se, true);
    out.push_back(at_most("score_marginal_cov_z", max_z(mean, model->info_marginal(theta), se), 3.0));
    moment_z(joint, mean, se, true);
    out.push_back(at_most("score_joint_cov_z", max_z(mean, model->info_full(theta), se), 3.0));
  }

  {
    const PartialScoreSummary s = partial_score_covariance(*model, theta, 500, 20, 2000,
                                                           derive_key(seed, {4}));
    out.push_back(at_most("partial_score_cov_z", max_z(s.cov, model->info_latent(theta), s.cov_stderr), 3.0));
    out.push_back(at_most("partial_score_mean_z", max_z(s.mean, MatrixXd::Zero(p, 1), s.mean_stderr), 3.0));
  }

  {
    std::vector<double> gaps;
    for (Index n : {100, 1000, 10000}) {
      RngStream rng = RngStream::derive(seed, Purpose::check, {5, static_cast<std::uint64_t>(n)});
      gaps.push_back(bvm_gap(*model, theta, n, rng).value);
    }
    out.push_back(strictly_decreasing("bvm_gap_decreasing", gaps));
    out.push_back(at_most("bvm_gap_n10000", gaps.back(), 0.05));
  }

  {
    std::vector<double> ratios;
    RngStream rng = RngStream::derive(seed, Purpose::check, {6});
    for (double h : {0.4, 0.2, 0.1, 0.05}) {
      const VectorXd hv = VectorXd::Constant(p, h / std::sqrt(static_cast<double>(p)));
      ratios.push_back(qmd_residual(*model, theta, hv, &rng).value / (h * h));
    }
    out.push_back(strictly_decreasing("qmd_ratio_decreasing", ratios));
    out.push_back(at_most("qmd_ratio_final_over_initial", ratios.back() / ratios.front(), 0.1));
  }

  {
    std::vector<double> medians;
    for (Index n : {100, 1000, 10000}) {
      medians.push_back(equivalent_statistics_gap(*model, theta, n, 50, derive_key(seed, {7})).median);
    }
    out.push_back(strictly_decreasing("equivalent_statistics_decreasing", medians));
    out.push_back(at_most("equivalent_statistics_median_n10000", medians.back(), 0.05));
  }

  {
    RngStream rng = RngStream::derive(seed, Purpose::check, {8});
    const GaussianMeasure target = GaussianMeasure::standard(1);
    MhKernel k;
    k.log_target = [&](const VectorXd& t) { return target.log_density(t); };
    k.propose = [](const VectorXd& from, RngStream& r) { return VectorXd(from + 2.0 * r.normal_vector(1)); };
    std::vector<MHStepRecord> records;
    RunOptions opts;
    opts.mh_records = &records;
    run_chain(k, VectorXd::Zero(1), 10000, rng, opts);
    double bad = 0.0;
    for (const auto& r : records) {
      if (r.accepted != (r.uniform_draw <= r.alpha) || r.alpha < 0.0 || r.alpha > 1.0) bad += 1.0;
    }
    out.push_back(at_most("mh_record_inconsistencies", bad, 0.0));
  }

  return out;
}

void write_check_csv(std::ostream& os, const std::vector<CheckResult>& results) {
  os << "check_name,statistic,threshold,pass\n";
  for (const auto& r : results) {
    os << r.name << ',' << num(r.statistic) << ',' << num(r.threshold) << ',' << (r.pass ? "true" : "false")
       << '\n';
  }
}

}  // namespace lcmc
