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

#include "lcmc/demos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lcmc/kernels.hpp"

namespace lcmc {

std::string to_string(DemoScenario s) {
  return s == DemoScenario::high_dim_is ? "high_dim_is" : "shrinking_mh";
}

DemoScenario parse_demo_scenario(const std::string& name) {
  if (name == "high_dim_is") return DemoScenario::high_dim_is;
  if (name == "shrinking_mh") return DemoScenario::shrinking_mh;
  throw std::invalid_argument("unknown demo scenario '" + name + "'");
}

double high_dim_is_constant() { return normal_pdf(0.0) - normal_pdf(1.0) + normal_cdf(-1.0); }

double high_dim_is_bound(long n, long m) {
  if (n < 2 || m < 1) throw std::invalid_argument("high_dim_is_bound: need n >= 2 and m >= 1");
  const double miss = std::exp(static_cast<double>(n - 1) * std::log1p(-std::ldexp(1.0, -static_cast<int>(std::min(m, 1000L)))));
  return (1.0 - miss) * high_dim_is_constant();
}

double shrinking_mh_floor(double n) {
  if (!(n > 0.0)) throw std::invalid_argument("shrinking_mh_floor: n must be positive");
  if (n <= 1.0) return 0.0;
  const double b = std::min(2.0, n);
  double half = normal_pdf(1.0) - normal_pdf(b) - (normal_cdf(b) - normal_cdf(1.0));
  if (n > 2.0) half += normal_cdf(-2.0) - normal_cdf(-n);
  return 2.0 * half / (1.0 - 2.0 * normal_cdf(-n));
}

double high_dim_is_witness(long n, long m, RngStream& rng) {
  if (n < 2 || m < 1) throw std::invalid_argument("high_dim_is: need n >= 2 and m >= 1");
  // Draws from Q_n, one column per state; coordinate 0 carries the shift.
  MatrixXd draws = rng.normal_matrix(n, m);
  draws.row(0).array() += 1.0;
  const double c = high_dim_is_constant();
  double worst = 0.0;
  for (Index i = 1; i < n; ++i) {
    const double e = draws.row(i).array().max(0.0).min(1.0).mean();
    worst = std::max(worst, std::abs(e - c));
  }
  return worst;
}

ShrinkingRun shrinking_mh_witness(long n, long m, RngStream& rng) {
  if (n < 1 || m < 1) throw std::invalid_argument("shrinking_mh: need n >= 1 and m >= 1");
  const double bound = static_cast<double>(n);
  const double prop_sd = 1.0 / std::sqrt(bound);
  MhKernel kernel;
  kernel.log_target = [bound](const VectorXd& x) {
    return std::abs(x[0]) <= bound ? -0.5 * x[0] * x[0] : -std::numeric_limits<double>::infinity();
  };
  kernel.propose = [prop_sd](const VectorXd&, RngStream& r) {
    return VectorXd::Constant(1, prop_sd * r.normal());
  };
  kernel.log_proposal = [bound](const VectorXd& to, const VectorXd&) {
    return -0.5 * bound * to[0] * to[0];
  };
  std::vector<MHStepRecord> records;
  RunOptions opts;
  opts.mh_records = &records;
  const ChainPath path = run_chain(kernel, VectorXd::Zero(1), m, rng, opts);

  ShrinkingRun out;
  double e = 0.0;
  for (Index i = 0; i < path.length(); ++i) {
    const double a = std::abs(path.theta(0, i));
    e += std::clamp(a - 1.0, 0.0, 1.0);
    out.max_abs_state = std::max(out.max_abs_state, a);
  }
  e /= static_cast<double>(path.length());
  out.witness = std::abs(e - shrinking_mh_floor(bound));
  if (!records.empty()) {
    const auto acc = std::count_if(records.begin(), records.end(),
                                   [](const MHStepRecord& r) { return r.accepted; });
    out.acceptance_rate = static_cast<double>(acc) / static_cast<double>(records.size());
  }
  return out;
}

DemoReport run_demo(DemoScenario scenario, long n, long m, int replicates, std::uint64_t seed) {
  if (replicates < 2) throw std::invalid_argument("run_demo: replicates must be >= 2");
  DemoReport rep;
  rep.scenario = scenario;
  rep.n = n;
  rep.m = m;
  rep.analytic = scenario == DemoScenario::high_dim_is ? high_dim_is_bound(n, m)
                                                       : shrinking_mh_floor(static_cast<double>(n));
  rep.threshold = 0.9 * rep.analytic;
  rep.witness.reserve(static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    RngStream rng = RngStream::derive(seed, Purpose::demo,
                                      {static_cast<std::uint64_t>(scenario), static_cast<std::uint64_t>(r)});
    rep.witness.push_back(scenario == DemoScenario::high_dim_is ? high_dim_is_witness(n, m, rng)
                                                                : shrinking_mh_witness(n, m, rng).witness);
  }
  double sum = 0.0;
  long above = 0;
  for (double w : rep.witness) {
    sum += w;
    if (w > rep.threshold) ++above;
  }
  const double k = static_cast<double>(replicates);
  const double mean = sum / k;
  double ss = 0.0;
  for (double w : rep.witness) ss += (w - mean) * (w - mean);
  rep.risk = {mean, DistanceMethod::monte_carlo, std::sqrt(ss / (k - 1.0) / k)};
  rep.fraction_above = static_cast<double>(above) / k;
  return rep;
}

}  // namespace lcmc
