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

#include "lcmc/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lcmc {

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::LLT<MatrixXd> require_spd(const MatrixXd& m, std::string_view what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.transpose()) > kSymmetryTolerance * scale) {
    throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
  }
  Eigen::LLT<MatrixXd> llt(symmetrize(m));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(what) + ": matrix is not positive definite");
  }
  const auto diag = llt.matrixL().toDenseMatrix().diagonal();
  if (diag.minCoeff() <= 0.0) {
    throw std::invalid_argument(std::string(what) + ": matrix is not positive definite");
  }
  return llt;
}

bool is_spd(const MatrixXd& m) {
  try {
    require_spd(m, "is_spd");
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

MatrixXd spd_inverse(const MatrixXd& m, std::string_view what) {
  const auto llt = require_spd(m, what);
  return symmetrize(llt.solve(MatrixXd::Identity(m.rows(), m.cols())));
}

}  // namespace lcmc
