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

#ifndef LCMC_ESTIMATORS_HPP
#define LCMC_ESTIMATORS_HPP

#include <functional>
#include <string>
#include <vector>

#include "lcmc/linalg.hpp"
#include "lcmc/measures.hpp"
#include "lcmc/rng.hpp"

namespace lcmc {

class AugmentationModel;

/// Chain prefix theta(0), ..., theta(m-1), stored as the columns of `theta`.
/// `latents[i]` is the latent y(i) (p x n) drawn from theta(i); either empty
/// or one per state.
struct ChainPath {
  MatrixXd theta;
  std::vector<MatrixXd> latents;

  Index length() const noexcept { return theta.cols(); }
  Index dim() const noexcept { return theta.rows(); }
  bool has_latents() const noexcept { return !latents.empty(); }
};

/// Uniform weights on theta(0..m-1).
WeightedSample empirical(const ChainPath& path, Index m);

/// Uniform weights on theta(floor(m/2) .. m-1).
WeightedSample burn_in(const ChainPath& path, Index m);

/// Uniform weights on theta(0), theta(2), ..., theta(2 (floor(m/2) - 1)).
WeightedSample thinning(const ChainPath& path, Index m);

enum class IsMode { raw, self_normalized };

/// Density ratio dPi/dQ evaluated at a state.
using RatioFn = std::function<double(const VectorXd&)>;

/// Importance-weighted estimator. `raw` keeps the weights ratio / m, whose
/// total mass is only 1 in expectation; such output must not be passed to
/// the transport distance. `self_normalized` divides by the ratio sum.
WeightedSample importance_weighted(const ChainPath& path, Index m, const RatioFn& ratio, IsMode mode);

/// Particle version of (1/m) sum_i P(dtheta | x, y(i)): `draws_per_step`
/// fresh posterior draws per latent, uniform weights.
WeightedSample rao_blackwell(const ChainPath& path, Index m, const AugmentationModel& model,
                             const MatrixXd& x, int draws_per_step, RngStream& rng);

enum class EstimatorKind { empirical, burn_in, thinning, importance, rao_blackwell };

std::string to_string(EstimatorKind kind);
/// Throws std::invalid_argument for unknown names.
EstimatorKind parse_estimator(const std::string& name);
std::string to_string(IsMode mode);
IsMode parse_is_mode(const std::string& name);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::empirical;
  int draws_per_step = 1;
  IsMode is_mode = IsMode::self_normalized;
};

/// Everything an estimator might need beyond the path.
struct EstimatorContext {
  RatioFn ratio;
  const AugmentationModel* model = nullptr;
  const MatrixXd* x = nullptr;
  RngStream* rng = nullptr;
};

WeightedSample apply_estimator(const EstimatorSpec& spec, const ChainPath& path, Index m,
                               const EstimatorContext& context);

}  // namespace lcmc

#endif  // LCMC_ESTIMATORS_HPP
