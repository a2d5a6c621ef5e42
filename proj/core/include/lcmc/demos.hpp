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

#ifndef LCMC_DEMOS_HPP
#define LCMC_DEMOS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcmc/measures.hpp"
#include "lcmc/rng.hpp"

/**
 * \file
 * \brief Two Monte Carlo procedures that are not consistent.
 *
 * - `high_dim_is`: crude Monte Carlo from Q_n = N_n((1,0,...,0), I_n) used
 *   to represent Pi_n = N_n(0, I_n). With m draws, some coordinate i >= 2 is
 *   negative in all of them with probability 1 - (1 - 2^-m)^(n-1), and then
 *   the Lipschitz witness psi(x) = clamp(x^i, 0, 1) is off by c.
 * - `shrinking_mh`: Metropolis-Hastings on N(0, 1) restricted to [-n, n]
 *   with independent proposals N(0, 1/n), started at 0. For fixed m the
 *   chain stays in [-1, 1] with probability tending to one, where the witness
 *   psi(x) = clamp(|x| - 1, 0, 1) vanishes.
 */

namespace lcmc {

enum class DemoScenario { high_dim_is, shrinking_mh };

std::string to_string(DemoScenario s);
DemoScenario parse_demo_scenario(const std::string& name);

/// int_0^inf min(1, x) phi(x) dx = phi(0) - phi(1) + 1 - Phi(1).
double high_dim_is_constant();

/// (1 - (1 - 2^-m)^(n-1)) * high_dim_is_constant().
double high_dim_is_bound(long n, long m);

/// Pi_n(psi) for the shrinking-proposal witness, i.e. the integral of
/// min(1, |x| - 1) phi(x) over 1 < |x| <= n divided by 1 - 2 Phi(-n).
double shrinking_mh_floor(double n);

/// Witness statistic max_{i >= 2} |e_m(psi_i) - c| of one crude Monte
/// Carlo run; a lower bound on w(e_m, Pi_n).
double high_dim_is_witness(long n, long m, RngStream& rng);

struct ShrinkingRun {
  /// |e_m(psi) - Pi_n(psi)|.
  double witness = 0.0;
  double max_abs_state = 0.0;
  double acceptance_rate = 0.0;
};

ShrinkingRun shrinking_mh_witness(long n, long m, RngStream& rng);

struct DemoReport {
  DemoScenario scenario = DemoScenario::high_dim_is;
  long n = 0;
  long m = 0;
  /// Mean witness over replicates, with its standard error.
  DistanceEstimate risk;
  /// Analytic lower bound (high_dim_is) or witness floor (shrinking_mh).
  double analytic = 0.0;
  /// 0.9 * analytic.
  double threshold = 0.0;
  /// Fraction of replicates whose witness exceeds `threshold`.
  double fraction_above = 0.0;
  std::vector<double> witness;
};

/// `replicates` independent runs on streams derived from `seed`.
DemoReport run_demo(DemoScenario scenario, long n, long m, int replicates, std::uint64_t seed);

}  // namespace lcmc

#endif  // LCMC_DEMOS_HPP
