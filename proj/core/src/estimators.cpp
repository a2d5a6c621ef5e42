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

#include "lcmc/estimators.hpp"

#include <stdexcept>

#include "lcmc/models.hpp"

namespace lcmc {

namespace {

void check_prefix(const ChainPath& path, Index m, const char* who) {
  if (m < 1) throw std::invalid_argument(std::string(who) + ": m must be >= 1");
  if (m > path.length()) {
    throw std::invalid_argument(std::string(who) + ": m exceeds the path length");
  }
}

}  // namespace

WeightedSample empirical(const ChainPath& path, Index m) {
  check_prefix(path, m, "empirical");
  return WeightedSample::uniform(path.theta.leftCols(m));
}

WeightedSample burn_in(const ChainPath& path, Index m) {
  check_prefix(path, m, "burn_in");
  const Index start = m / 2;
  return WeightedSample::uniform(path.theta.middleCols(start, m - start));
}

WeightedSample thinning(const ChainPath& path, Index m) {
  check_prefix(path, m, "thinning");
  if (m < 2) throw std::invalid_argument("thinning: m must be >= 2");
  const Index k = m / 2;
  MatrixXd pts(path.dim(), k);
  for (Index i = 0; i < k; ++i) pts.col(i) = path.theta.col(2 * i);
  return WeightedSample::uniform(std::move(pts));
}

WeightedSample importance_weighted(const ChainPath& path, Index m, const RatioFn& ratio, IsMode mode) {
  check_prefix(path, m, "importance_weighted");
  VectorXd w(m);
  for (Index i = 0; i < m; ++i) {
    const double r = ratio(path.theta.col(i));
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("importance_weighted: ratio must be finite and non-negative");
    }
    w[i] = r;
  }
  if (mode == IsMode::raw) {
    w /= static_cast<double>(m);
  } else {
    const double s = w.sum();
    if (!(s > 0.0)) throw std::invalid_argument("importance_weighted: all ratios are zero");
    w /= s;
  }
  return WeightedSample(path.theta.leftCols(m), std::move(w));
}

WeightedSample rao_blackwell(const ChainPath& path, Index m, const AugmentationModel& model,
                             const MatrixXd& x, int draws_per_step, RngStream& rng) {
  check_prefix(path, m, "rao_blackwell");
  if (!path.has_latents()) throw std::invalid_argument("rao_blackwell: path carries no latents");
  if (draws_per_step < 1) throw std::invalid_argument("rao_blackwell: draws_per_step must be >= 1");
  MatrixXd pts(path.dim(), m * draws_per_step);
  Index col = 0;
  for (Index i = 0; i < m; ++i) {
    for (int d = 0; d < draws_per_step; ++d) {
      pts.col(col++) = model.sample_posterior_full(x, path.latents[static_cast<std::size_t>(i)], rng);
    }
  }
  return WeightedSample::uniform(std::move(pts));
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::empirical: return "empirical";
    case EstimatorKind::burn_in: return "burn_in";
    case EstimatorKind::thinning: return "thinning";
    case EstimatorKind::importance: return "importance";
    case EstimatorKind::rao_blackwell: return "rao_blackwell";
  }
  return "unknown";
}

EstimatorKind parse_estimator(const std::string& name) {
  for (auto k : {EstimatorKind::empirical, EstimatorKind::burn_in, EstimatorKind::thinning,
                 EstimatorKind::importance, EstimatorKind::rao_blackwell}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

std::string to_string(IsMode mode) { return mode == IsMode::raw ? "raw" : "self_normalized"; }

IsMode parse_is_mode(const std::string& name) {
  if (name == "raw") return IsMode::raw;
  if (name == "self_normalized") return IsMode::self_normalized;
  throw std::invalid_argument("unknown is_mode '" + name + "'");
}

WeightedSample apply_estimator(const EstimatorSpec& spec, const ChainPath& path, Index m,
                               const EstimatorContext& context) {
  switch (spec.kind) {
    case EstimatorKind::empirical: return empirical(path, m);
    case EstimatorKind::burn_in: return burn_in(path, m);
    case EstimatorKind::thinning: return thinning(path, m);
    case EstimatorKind::importance:
      if (!context.ratio) throw std::invalid_argument("importance estimator needs a density ratio");
      return importance_weighted(path, m, context.ratio, spec.is_mode);
    case EstimatorKind::rao_blackwell:
      if (context.model == nullptr || context.x == nullptr || context.rng == nullptr) {
        throw std::invalid_argument("rao_blackwell estimator needs a model, data and a stream");
      }
      return rao_blackwell(path, m, *context.model, *context.x, spec.draws_per_step, *context.rng);
  }
  throw std::logic_error("apply_estimator: unhandled kind");
}

}  // namespace lcmc
