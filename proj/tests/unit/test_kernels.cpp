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

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "lcmc/kernels.hpp"
#include "lcmc/models.hpp"
#include "stats.hpp"

namespace {

using lcmc::GaussianMeasure;
using lcmc::Index;
using lcmc::MatrixXd;
using lcmc::RngStream;
using lcmc::VectorXd;
using lcmc::WeightedSample;

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

std::shared_ptr<lcmc::NormalAugmentationModel> normal_model(double sigma_y, double sigma_x,
                                                            double prior_cov) {
  return std::make_shared<lcmc::NormalAugmentationModel>(scalar(sigma_y), scalar(sigma_x),
                                                         VectorXd::Zero(1), scalar(prior_cov));
}

lcmc::MhKernel fixed_proposal(double to) {
  lcmc::MhKernel k;
  k.log_target = [](const VectorXd& t) { return -0.5 * t.squaredNorm(); };
  k.propose = [to](const VectorXd&, RngStream&) { return VectorXd::Constant(1, to); };
  return k;
}

TEST(MhStep, EqualTargetAlwaysAccepts) {
  auto k = fixed_proposal(-1.0);
  RngStream rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto r = lcmc::mh_step(k, VectorXd::Constant(1, 1.0), rng);
    EXPECT_EQ(r.record.alpha, 1.0);
    EXPECT_TRUE(r.record.accepted);
    EXPECT_EQ(r.next[0], -1.0);
  }
}

TEST(MhStep, GaussianRatio) {
  auto k = fixed_proposal(2.0);
  RngStream rng(2);
  int accepted = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto r = lcmc::mh_step(k, VectorXd::Zero(1), rng);
    ASSERT_NEAR(r.record.alpha, 0.13533528323661269, 1e-15);
    ASSERT_EQ(r.record.accepted, r.record.uniform_draw <= r.record.alpha);
    ASSERT_EQ(r.next[0], r.record.accepted ? 2.0 : 0.0);
    accepted += r.record.accepted ? 1 : 0;
  }
  const double a = 0.13533528323661269;
  EXPECT_NEAR(static_cast<double>(accepted) / n, a, 3.0 * std::sqrt(a * (1 - a) / n));
}

TEST(MhStep, AsymmetricProposalCorrection) {
  lcmc::MhKernel k;
  k.log_target = [](const VectorXd&) { return 0.0; };
  k.propose = [](const VectorXd&, RngStream&) { return VectorXd::Constant(1, 1.0); };
  // log q(to | from) = to, so q(1 | 0) / q(0 | 1) = e.
  k.log_proposal = [](const VectorXd& to, const VectorXd&) { return to[0]; };
  RngStream rng(3);
  const auto r = lcmc::mh_step(k, VectorXd::Zero(1), rng);
  EXPECT_NEAR(r.record.alpha, std::exp(-1.0), 1e-15);
}

TEST(MhStep, OutsideSupportAndNan) {
  lcmc::MhKernel k;
  k.log_target = [](const VectorXd& t) {
    return t[0] > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
  };
  k.propose = [](const VectorXd&, RngStream&) { return VectorXd::Constant(1, 1.0); };
  RngStream rng(4);
  const auto r = lcmc::mh_step(k, VectorXd::Zero(1), rng);
  EXPECT_EQ(r.record.alpha, 0.0);
  EXPECT_FALSE(r.record.accepted);
  EXPECT_THROW(lcmc::mh_step(k, VectorXd::Constant(1, 2.0), rng), std::domain_error);
  k.log_target = [](const VectorXd& t) { return t[0] > 0.0 ? std::nan("") : 0.0; };
  EXPECT_THROW(lcmc::mh_step(k, VectorXd::Zero(1), rng), std::domain_error);
}

TEST(RunChain, RecordsMhSteps) {
  lcmc::MhKernel k;
  k.log_target = [](const VectorXd& t) { return -0.5 * t.squaredNorm(); };
  k.propose = [](const VectorXd& from, RngStream& rng) {
    return VectorXd(from + rng.normal_vector(from.size()));
  };
  std::vector<lcmc::MHStepRecord> records;
  lcmc::RunOptions opts;
  opts.mh_records = &records;
  RngStream rng(5);
  const auto path = lcmc::run_chain(k, VectorXd::Zero(1), 500, rng, opts);
  ASSERT_EQ(records.size(), 499u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].accepted, records[i].uniform_draw <= records[i].alpha);
    const double prev = path.theta(0, static_cast<Index>(i));
    const double next = path.theta(0, static_cast<Index>(i) + 1);
    EXPECT_EQ(next, records[i].accepted ? records[i].proposed[0] : prev);
  }
}

TEST(GibbsStep, ConditionalMeanIsAverageOfStateAndData) {
  auto model = normal_model(1.0, 1.0, 1e6);
  const MatrixXd x = MatrixXd::Constant(1, 1, 3.0);
  const VectorXd theta = VectorXd::Constant(1, -1.0);
  RngStream rng(6);
  std::vector<double> next;
  for (int i = 0; i < 100000; ++i) next.push_back(lcmc::gibbs_step(*model, x, theta, rng).next[0]);
  const auto ms = lcmc::testing::mean_se(next);
  EXPECT_NEAR(ms.mean, 1.0, 3.0 * ms.se + 1e-5);
}

TEST(GibbsStep, PreservesThePosterior) {
  auto model = normal_model(1.0, 1.0, 100.0);
  RngStream data_rng(7);
  const auto data = model->sample_data(VectorXd::Constant(1, 0.5), 10, data_rng);
  const auto posterior = model->posterior_marginal(data.x);
  RngStream rng(8);
  MatrixXd out(1, 10000);
  for (Index i = 0; i < 10000; ++i) {
    out.col(i) = lcmc::gibbs_step(*model, data.x, posterior.sample(rng), rng).next;
  }
  std::vector<double> floor;
  for (std::uint64_t r = 0; r < 10; ++r) {
    auto s = RngStream::derive(9, lcmc::Purpose::floor, {r});
    auto ref = RngStream::derive(9, lcmc::Purpose::reference, {r});
    floor.push_back(
        lcmc::w1_to_gaussian(WeightedSample::uniform(posterior.sample(10000, s)), posterior, 10000, ref)
            .value);
  }
  const auto f = lcmc::testing::mean_se(floor);
  RngStream ref(10);
  const auto d = lcmc::w1_to_gaussian(WeightedSample::uniform(out), posterior, 10000, ref);
  EXPECT_LE(d.value, f.mean + 3.0 * std::hypot(*d.stderr_value, f.se * std::sqrt(10.0)));
}

TEST(GibbsStep, NoMissingInformationGivesIndependentDraws) {
  auto model = std::make_shared<lcmc::NormalAugmentationModel>(
      scalar(1.0), scalar(1e-10), VectorXd::Zero(1), scalar(100.0));
  RngStream data_rng(11);
  auto x = std::make_shared<const MatrixXd>(
      model->sample_data(VectorXd::Constant(1, 0.5), 10, data_rng).x);
  RngStream rng(12);
  const Index m = 20000;
  const auto path = lcmc::run_chain(lcmc::GibbsKernel{model, x}, VectorXd::Zero(1), m, rng);
  std::vector<double> v(path.theta.data(), path.theta.data() + m);
  EXPECT_LE(std::abs(lcmc::testing::lag1(v)), 3.0 / std::sqrt(static_cast<double>(m)));
}

TEST(ApproxGibbs, ScalarArithmetic) {
  const lcmc::ApproxGibbsKernel k(VectorXd::Zero(1), scalar(0.5), scalar(0.5), scalar(1.0), 10.0);
  EXPECT_NEAR(k.autoregression()(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(k.innovation_cov()(0, 0), 0.15, 1e-15);
  EXPECT_NEAR(k.stationary_law().covariance()(0, 0), 0.2, 1e-15);
}

TEST(ApproxGibbs, NoMissingInformationIsIid) {
  const lcmc::ApproxGibbsKernel k(VectorXd::Constant(1, 2.0), scalar(4.0), scalar(0.0), scalar(4.0),
                                  100.0);
  EXPECT_EQ(k.autoregression()(0, 0), 0.0);
  EXPECT_NEAR(k.innovation_cov()(0, 0), 1.0 / 400.0, 1e-16);
  RngStream rng(13);
  const Index m = 20000;
  const auto path = lcmc::run_chain(k, VectorXd::Constant(1, 2.0), m, rng);
  std::vector<double> v(path.theta.data(), path.theta.data() + m);
  EXPECT_LE(std::abs(lcmc::testing::lag1(v)), 3.0 / std::sqrt(static_cast<double>(m)));
  const auto ms = lcmc::testing::mean_se(v);
  EXPECT_NEAR(ms.mean, 2.0, 3.0 * ms.se);
}

TEST(ApproxGibbs, LagOneRegressionRecoversAutoregression) {
  MatrixXd i(2, 2);
  i << 1.0, 0.3, 0.3, 0.8;
  MatrixXd j(2, 2);
  j << 0.7, -0.2, -0.2, 0.5;
  const MatrixXd k = i + j;
  const VectorXd center = VectorXd::Constant(2, 0.5);
  const lcmc::ApproxGibbsKernel kernel(center, i, j, k, 50.0);
  const MatrixXd b = kernel.autoregression();
  std::vector<MatrixXd> fits;
  for (std::uint64_t r = 0; r < 20; ++r) {
    auto rng = RngStream::derive(14, lcmc::Purpose::chain, {r});
    const VectorXd start = kernel.stationary_law().sample(rng);
    const auto path = lcmc::run_chain(kernel, start, 5000, rng);
    const MatrixXd z = path.theta.colwise() - center;
    const MatrixXd lead = z.rightCols(4999);
    const MatrixXd lag = z.leftCols(4999);
    fits.push_back((lead * lag.transpose()) * (lag * lag.transpose()).inverse());
  }
  for (Index r = 0; r < 2; ++r) {
    for (Index c = 0; c < 2; ++c) {
      std::vector<double> entries;
      for (const auto& f : fits) entries.push_back(f(r, c));
      const auto ms = lcmc::testing::mean_se(entries);
      EXPECT_NEAR(ms.mean, b(r, c), 3.0 * ms.se) << "entry " << r << "," << c;
    }
  }
}

TEST(ApproxGibbs, RejectsInconsistentTriple) {
  EXPECT_THROW(lcmc::ApproxGibbsKernel(VectorXd::Zero(1), scalar(0.5), scalar(0.5), scalar(1.1), 1.0),
               std::invalid_argument);
  EXPECT_THROW(lcmc::ApproxGibbsKernel(VectorXd::Zero(1), scalar(0.5), scalar(-0.5), scalar(0.0), 1.0),
               std::invalid_argument);
  EXPECT_THROW(lcmc::ApproxGibbsKernel(VectorXd::Zero(2), scalar(0.5), scalar(0.5), scalar(1.0), 1.0),
               std::invalid_argument);
}

TEST(RunChain, LengthOneAndDeterminism) {
  const auto g = GaussianMeasure::standard(2);
  const lcmc::IidKernel iid{[g](RngStream& rng) { return g.sample(rng); }};
  RngStream rng(15);
  const VectorXd init = VectorXd::Constant(2, 7.0);
  const auto one = lcmc::run_chain(iid, init, 1, rng);
  ASSERT_EQ(one.length(), 1);
  EXPECT_EQ(VectorXd(one.theta.col(0)), init);

  auto model = normal_model(1.0, 2.0, 10.0);
  RngStream data_rng(16);
  auto x = std::make_shared<const MatrixXd>(
      model->sample_data(VectorXd::Constant(1, 0.5), 30, data_rng).x);
  RngStream a(17);
  RngStream b(17);
  const auto pa = lcmc::run_chain(lcmc::GibbsKernel{model, x}, VectorXd::Zero(1), 300, a);
  const auto pb = lcmc::run_chain(lcmc::GibbsKernel{model, x}, VectorXd::Zero(1), 300, b);
  EXPECT_EQ(pa.theta, pb.theta);
  EXPECT_THROW(lcmc::run_chain(iid, init, 0, rng), std::invalid_argument);
}

TEST(RunChain, KeepsOneLatentPerState) {
  auto model = normal_model(1.0, 1.0, 10.0);
  RngStream data_rng(18);
  auto x = std::make_shared<const MatrixXd>(
      model->sample_data(VectorXd::Constant(1, 0.5), 5, data_rng).x);
  RngStream rng(19);
  lcmc::RunOptions opts;
  opts.keep_latents = true;
  const auto path = lcmc::run_chain(lcmc::GibbsKernel{model, x}, VectorXd::Zero(1), 12, rng, opts);
  ASSERT_EQ(path.latents.size(), 12u);
  EXPECT_EQ(path.latents[0].cols(), 5);
}

TEST(RunChain, IidKernelApproachesTarget) {
  const auto g = GaussianMeasure::standard(1);
  const lcmc::IidKernel iid{[g](RngStream& rng) { return g.sample(rng); }};
  RngStream rng(20);
  const auto path = lcmc::run_chain(iid, g.sample(rng), 100000, rng);
  RngStream ref(21);
  EXPECT_LE(lcmc::w1_to_gaussian(WeightedSample::uniform(path.theta), g, 10000, ref).value, 0.02);
}

TEST(Localization, Examples) {
  const lcmc::LocalizationMap id(VectorXd::Zero(2), 1.0);
  const VectorXd t = VectorXd::Constant(2, 1.5);
  EXPECT_EQ(id.apply(t), t);
  const lcmc::LocalizationMap map = lcmc::LocalizationMap::root_n(VectorXd::Constant(2, 3.0), 400.0);
  EXPECT_DOUBLE_EQ(map.delta_n, 0.05);
  const auto local = lcmc::localize(WeightedSample::point_mass(map.theta_hat), map);
  EXPECT_EQ(local.point(0), VectorXd::Zero(2));
  const auto back = lcmc::delocalize(lcmc::localize(WeightedSample::point_mass(t), map), map);
  EXPECT_NEAR((back.point(0) - t).norm(), 0.0, 1e-14);
  EXPECT_THROW(lcmc::LocalizationMap(VectorXd::Zero(1), 0.0), std::invalid_argument);
}

TEST(Localization, GaussianSampleMapsToStandardShape) {
  const double n = 500.0;
  MatrixXd sigma(2, 2);
  sigma << 1.0, 0.4, 0.4, 2.0;
  const VectorXd center = VectorXd::Constant(2, 0.25);
  const GaussianMeasure g(center, sigma / n);
  const auto map = lcmc::LocalizationMap::root_n(center, n);
  const GaussianMeasure shape(VectorXd::Zero(2), sigma);
  const auto lg = lcmc::localize(g, map);
  EXPECT_LE(lcmc::max_abs(lg.covariance() - sigma), 1e-12);
  EXPECT_LE(lg.mean().norm(), 1e-14);

  std::vector<double> floor;
  for (std::uint64_t r = 0; r < 8; ++r) {
    auto s1 = RngStream::derive(22, lcmc::Purpose::floor, {r, 0});
    auto s2 = RngStream::derive(22, lcmc::Purpose::floor, {r, 1});
    floor.push_back(lcmc::w1_truncated(WeightedSample::uniform(shape.sample(1000, s1)),
                                       WeightedSample::uniform(shape.sample(1000, s2)))
                        .value);
  }
  const auto f = lcmc::testing::mean_se(floor);
  RngStream rng(23);
  RngStream ref(24);
  const auto local = lcmc::localize(WeightedSample::uniform(g.sample(1000, rng)), map);
  const auto d = lcmc::w1_to_gaussian(local, shape, 1000, ref);
  EXPECT_LE(d.value, f.mean + 3.0 * std::hypot(*d.stderr_value, f.se * std::sqrt(8.0)));
}

TEST(PerturbedStart, Scaling) {
  RngStream rng(25);
  const GaussianMeasure tight(VectorXd::Zero(1), scalar(1e-20));
  const VectorXd tilde = VectorXd::Constant(1, 1.25);
  EXPECT_NEAR(lcmc::perturbed_start(tilde, 100.0, tight, rng)[0], 1.25, 1e-9);

  std::vector<double> s;
  const auto shape = GaussianMeasure::standard(1);
  for (int i = 0; i < 50000; ++i) s.push_back(lcmc::perturbed_start(VectorXd::Zero(1), 100.0, shape, rng)[0]);
  const auto ms = lcmc::testing::mean_se(s);
  EXPECT_NEAR(ms.mean, 0.0, 3.0 * ms.se);
  const double var = ms.se * ms.se * static_cast<double>(s.size());
  // Sample variance has relative sd sqrt(2 / N).
  EXPECT_NEAR(var, 0.01, 3.0 * 0.01 * std::sqrt(2.0 / 50000.0));
  EXPECT_THROW(lcmc::perturbed_start(tilde, 0.5, shape, rng), std::invalid_argument);
}

}  // namespace
