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

#include <memory>

#include <benchmark/benchmark.h>

#include "lcmc/kernels.hpp"
#include "lcmc/models.hpp"

namespace {

std::shared_ptr<const lcmc::NormalAugmentationModel> scalar_model() {
  using lcmc::MatrixXd;
  return std::make_shared<const lcmc::NormalAugmentationModel>(
      MatrixXd::Identity(1, 1), MatrixXd::Identity(1, 1), lcmc::VectorXd::Zero(1), 100.0 * MatrixXd::Identity(1, 1));
}

void BM_GibbsStep(benchmark::State& state) {
  const auto model = scalar_model();
  lcmc::RngStream rng(21);
  const auto data = model->sample_data(lcmc::VectorXd::Constant(1, 0.5), state.range(0), rng);
  lcmc::VectorXd theta = data.x.rowwise().mean();
  for (auto _ : state) {
    theta = lcmc::gibbs_step(*model, data.x, theta, rng).next;
    benchmark::DoNotOptimize(theta.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GibbsStep)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ApproxGibbsStep(benchmark::State& state) {
  const auto p = static_cast<lcmc::Index>(state.range(0));
  using lcmc::MatrixXd;
  const MatrixXd i = 0.5 * MatrixXd::Identity(p, p);
  const lcmc::ApproxGibbsKernel k(lcmc::VectorXd::Zero(p), i, i, 2.0 * i, 1000.0);
  lcmc::RngStream rng(22);
  lcmc::VectorXd theta = lcmc::VectorXd::Zero(p);
  for (auto _ : state) {
    theta = k.step(theta, rng);
    benchmark::DoNotOptimize(theta.data());
  }
}
BENCHMARK(BM_ApproxGibbsStep)->Arg(1)->Arg(4)->Arg(16);

void BM_Normal(benchmark::State& state) {
  lcmc::RngStream rng(23);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_Normal);

}  // namespace
