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

#include <benchmark/benchmark.h>

#include "lcmc/measures.hpp"
#include "lcmc/rng.hpp"

namespace {

void BM_Line1d(benchmark::State& state) {
  const auto size = static_cast<lcmc::Index>(state.range(0));
  lcmc::RngStream rng(11);
  const auto a = lcmc::WeightedSample::uniform(rng.normal_matrix(1, size));
  const auto b = lcmc::WeightedSample::uniform(rng.normal_matrix(1, size));
  for (auto _ : state) benchmark::DoNotOptimize(lcmc::w1_truncated(a, b).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Line1d)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_Line1dUnbounded(benchmark::State& state) {
  const auto size = static_cast<lcmc::Index>(state.range(0));
  lcmc::RngStream rng(12);
  const auto a = lcmc::WeightedSample::uniform(rng.normal_matrix(1, size));
  const auto b = lcmc::WeightedSample::uniform(rng.normal_matrix(1, size));
  const lcmc::TransportOptions opts{lcmc::kUnbounded, 4096};
  for (auto _ : state) benchmark::DoNotOptimize(lcmc::w1_truncated(a, b, opts).value);
}
BENCHMARK(BM_Line1dUnbounded)->Arg(4096)->Arg(65536);

void BM_TransportLp2d(benchmark::State& state) {
  const auto size = static_cast<lcmc::Index>(state.range(0));
  lcmc::RngStream rng(13);
  const auto a = lcmc::WeightedSample::uniform(rng.normal_matrix(2, size));
  const auto b = lcmc::WeightedSample::uniform(rng.normal_matrix(2, size));
  for (auto _ : state) benchmark::DoNotOptimize(lcmc::w1_truncated(a, b).value);
}
BENCHMARK(BM_TransportLp2d)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
