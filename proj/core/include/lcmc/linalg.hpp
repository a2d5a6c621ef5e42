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

#ifndef LCMC_LINALG_HPP
#define LCMC_LINALG_HPP

#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace lcmc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Absolute tolerance used for symmetry checks on covariance-like inputs.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Largest absolute entry.
double max_abs(const MatrixXd& m);

/// Throws std::invalid_argument unless `m` is square, symmetric to
/// kSymmetryTolerance (relative to its scale) and positive definite.
/// Returns the Cholesky factorization.
Eigen::LLT<MatrixXd> require_spd(const MatrixXd& m, std::string_view what);

bool is_spd(const MatrixXd& m);

/// Inverse of an SPD matrix through its Cholesky factor, symmetrized.
MatrixXd spd_inverse(const MatrixXd& m, std::string_view what);

/// Symmetric part (m + m^T) / 2.
MatrixXd symmetrize(const MatrixXd& m);

}  // namespace lcmc

#endif  // LCMC_LINALG_HPP
