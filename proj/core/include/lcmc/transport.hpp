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

#ifndef LCMC_TRANSPORT_HPP
#define LCMC_TRANSPORT_HPP

#include <span>

#include "lcmc/linalg.hpp"

namespace lcmc::transport {

/// Exact truncated W1 between two weighted point sets on the line.
///
/// min(|x - y|, T) is the shortest-path metric of the sorted support joined
/// by a hub node at distance T/2 from every point, so the transport problem
/// is a min-cost flow on that graph. Eliminating the line flows leaves a
/// one-dimensional recursion over the cumulative hub flow whose value
/// functions are convex piecewise linear; they are carried with weighted
/// slope breakpoints. T = infinity reduces to the CDF formula.
double line_w1(std::span<const double> xa, std::span<const double> wa,
               std::span<const double> xb, std::span<const double> wb, double truncation);

/// Minimum cost of the balanced transportation problem
/// min <cost, plan> s.t. plan 1 = supply, plan^T 1 = demand, plan >= 0.
///
/// Transportation simplex on the spanning-tree basis. Supplies are perturbed
/// by a vanishing amount during the pivots to rule out degenerate cycling;
/// the final basis is re-solved with the original supplies.
double transportation_cost(const MatrixXd& cost, const VectorXd& supply, const VectorXd& demand);

}  // namespace lcmc::transport

#endif  // LCMC_TRANSPORT_HPP
