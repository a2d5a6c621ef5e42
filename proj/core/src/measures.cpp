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

#include "lcmc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "lcmc/transport.hpp"

namespace lcmc {

namespace {

constexpr double kInputMassTolerance = 1e-9;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool lex_less(const MatrixXd& pts, Index a, Index b) {
  for (Index r = 0; r < pts.rows(); ++r) {
    if (pts(r, a) < pts(r, b)) return true;
    if (pts(r, a) > pts(r, b)) return false;
  }
  return false;
}

}  // namespace

WeightedSample::WeightedSample(MatrixXd points, VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.cols() == 0 || points_.rows() == 0) {
    throw std::invalid_argument("WeightedSample: empty point set");
  }
  if (weights_.size() != points_.cols()) {
    throw std::invalid_argument("WeightedSample: weight count does not match point count");
  }
  if (!points_.allFinite()) throw std::invalid_argument("WeightedSample: non-finite point");
  for (Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw std::invalid_argument("WeightedSample: weights must be finite and non-negative");
    }
  }
  mass_ = weights_.sum();
  normalized_ = std::abs(mass_ - 1.0) <= kNormalizedTolerance;
}

WeightedSample WeightedSample::uniform(MatrixXd points) {
  const Index n = points.cols();
  if (n == 0) throw std::invalid_argument("WeightedSample: empty point set");
  return WeightedSample(std::move(points), VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

WeightedSample WeightedSample::point_mass(const VectorXd& x) {
  return WeightedSample(MatrixXd(x), VectorXd::Ones(1));
}

WeightedSample WeightedSample::from_1d(const std::vector<double>& xs,
                                       const std::vector<double>& ws) {
  if (xs.size() != ws.size()) {
    throw std::invalid_argument("WeightedSample: weight count does not match point count");
  }
  MatrixXd pts(1, static_cast<Index>(xs.size()));
  VectorXd w(static_cast<Index>(ws.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts(0, static_cast<Index>(i)) = xs[i];
    w[static_cast<Index>(i)] = ws[i];
  }
  return WeightedSample(std::move(pts), std::move(w));
}

WeightedSample WeightedSample::merged() const {
  std::vector<Index> idx(static_cast<std::size_t>(size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return lex_less(points_, a, b); });
  std::vector<Index> keep;
  std::vector<double> w;
  for (Index i : idx) {
    if (!keep.empty() && points_.col(keep.back()) == points_.col(i)) {
      w.back() += weights_[i];
    } else {
      keep.push_back(i);
      w.push_back(weights_[i]);
    }
  }
  MatrixXd pts(dim(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) pts.col(static_cast<Index>(k)) = points_.col(keep[k]);
  return WeightedSample(std::move(pts), Eigen::Map<VectorXd>(w.data(), static_cast<Index>(w.size())));
}

WeightedSample WeightedSample::translated(const VectorXd& shift) const {
  if (shift.size() != dim()) throw std::invalid_argument("WeightedSample: shift dimension mismatch");
  MatrixXd pts = points_.colwise() + shift;
  return WeightedSample(std::move(pts), weights_);
}

WeightedSample WeightedSample::renormalized() const {
  if (!(mass_ > 0.0)) throw std::invalid_argument("WeightedSample: zero total mass");
  return WeightedSample(points_, weights_ / mass_);
}

GaussianMeasure::GaussianMeasure(VectorXd mean, MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (mean_.size() == 0) throw std::invalid_argument("GaussianMeasure: empty mean");
  if (covariance_.rows() != mean_.size()) {
    throw std::invalid_argument("GaussianMeasure: mean and covariance dimensions differ");
  }
  if (!mean_.allFinite()) throw std::invalid_argument("GaussianMeasure: non-finite mean");
  auto llt = require_spd(covariance_, "GaussianMeasure covariance");
  chol_ = llt.matrixL();
  const double log_det = 2.0 * chol_.diagonal().array().log().sum();
  log_norm_ = -0.5 * (static_cast<double>(dim()) * std::log(2.0 * std::numbers::pi) + log_det);
}

GaussianMeasure GaussianMeasure::standard(Index p) {
  return GaussianMeasure(VectorXd::Zero(p), MatrixXd::Identity(p, p));
}

VectorXd GaussianMeasure::sample(RngStream& rng) const {
  return mean_ + chol_ * rng.normal_vector(dim());
}

MatrixXd GaussianMeasure::sample(Index count, RngStream& rng) const {
  MatrixXd z = rng.normal_matrix(dim(), count);
  MatrixXd out = chol_ * z;
  out.colwise() += mean_;
  return out;
}

double GaussianMeasure::log_density(const VectorXd& x) const {
  const VectorXd z = chol_.triangularView<Eigen::Lower>().solve(x - mean_);
  return log_norm_ - 0.5 * z.squaredNorm();
}

std::string to_string(DistanceMethod method) {
  switch (method) {
    case DistanceMethod::exact_1d: return "exact_1d";
    case DistanceMethod::exact_lp: return "exact_lp";
    case DistanceMethod::sampled: return "sampled";
    case DistanceMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

DistanceEstimate w1_truncated(const WeightedSample& a, const WeightedSample& b,
                              const TransportOptions& options) {
  if (a.dim() != b.dim()) throw std::invalid_argument("w1_truncated: dimension mismatch");
  if (std::abs(a.total_mass() - 1.0) > kInputMassTolerance ||
      std::abs(b.total_mass() - 1.0) > kInputMassTolerance) {
    throw std::invalid_argument("w1_truncated: inputs must be probability measures");
  }
  if (!(options.truncation > 0.0)) {
    throw std::invalid_argument("w1_truncated: truncation must be positive");
  }
  const VectorXd wa = a.weights() / a.total_mass();
  const VectorXd wb = b.weights() / b.total_mass();

  if (a.dim() == 1) {
    const double* xa = a.points().data();
    const double* xb = b.points().data();
    const double v = transport::line_w1({xa, static_cast<std::size_t>(a.size())},
                                        {wa.data(), static_cast<std::size_t>(wa.size())},
                                        {xb, static_cast<std::size_t>(b.size())},
                                        {wb.data(), static_cast<std::size_t>(wb.size())},
                                        options.truncation);
    return {std::clamp(v, 0.0, options.truncation), DistanceMethod::exact_1d, std::nullopt};
  }

  const WeightedSample ma = WeightedSample(a.points(), wa).merged();
  const WeightedSample mb = WeightedSample(b.points(), wb).merged();
  if (ma.size() + mb.size() > options.lp_support_cap) {
    throw std::invalid_argument("w1_truncated: combined support " +
                                std::to_string(ma.size() + mb.size()) +
                                " exceeds the exact-solver cap; subsample first");
  }
  MatrixXd cost(ma.size(), mb.size());
  for (Index j = 0; j < mb.size(); ++j) {
    for (Index i = 0; i < ma.size(); ++i) {
      cost(i, j) = std::min((ma.point(i) - mb.point(j)).norm(), options.truncation);
    }
  }
  const double v = transport::transportation_cost(cost, ma.weights(), mb.weights());
  return {std::clamp(v, 0.0, options.truncation), DistanceMethod::exact_lp, std::nullopt};
}

DistanceEstimate w1_to_gaussian(const WeightedSample& a, const GaussianMeasure& g, Index ref_size,
                                RngStream& rng, const TransportOptions& options, int redraws) {
  if (ref_size < 1000) throw std::invalid_argument("w1_to_gaussian: ref_size must be >= 1000");
  if (redraws < 2) throw std::invalid_argument("w1_to_gaussian: redraws must be >= 2");
  if (a.dim() != g.dim()) throw std::invalid_argument("w1_to_gaussian: dimension mismatch");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(redraws));
  for (int r = 0; r < redraws; ++r) {
    const WeightedSample ref = WeightedSample::uniform(g.sample(ref_size, rng));
    values.push_back(w1_truncated(a, ref, options).value);
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / redraws;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (redraws - 1) / redraws);
  return {mean, DistanceMethod::sampled, se};
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Mass of N(mu, s^2) on (lo, hi), using the upper tail where that is more
// accurate.
double interval_mass(double mu, double s, double lo, double hi) {
  const double zl = (lo - mu) / s;
  const double zh = (hi - mu) / s;
  if (zl > 0.0) return normal_cdf(-zl) - normal_cdf(-zh);
  return normal_cdf(zh) - normal_cdf(zl);
}

}  // namespace

DistanceEstimate tv_gaussians(const GaussianMeasure& g1, const GaussianMeasure& g2,
                              RngStream& rng, Index mc_size) {
  if (g1.dim() != g2.dim()) throw std::invalid_argument("tv_gaussians: dimension mismatch");
  if (g1.dim() == 1) {
    const double m1 = g1.mean()[0];
    const double m2 = g2.mean()[0];
    const double s1 = std::sqrt(g1.covariance()(0, 0));
    const double s2 = std::sqrt(g2.covariance()(0, 0));
    // log f1 - log f2 = qa x^2 + qb x + qc.
    const double qa = 0.5 / (s2 * s2) - 0.5 / (s1 * s1);
    const double qb = m1 / (s1 * s1) - m2 / (s2 * s2);
    const double qc = 0.5 * m2 * m2 / (s2 * s2) - 0.5 * m1 * m1 / (s1 * s1) + std::log(s2 / s1);
    std::vector<double> cuts;
    const double qscale = std::max({std::abs(qa), 1.0 / (s1 * s1), 1.0 / (s2 * s2)});
    if (std::abs(qa) <= 1e-14 * qscale) {
      if (qb != 0.0) cuts.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (qb + std::copysign(sq, qb));
        cuts.push_back(q / qa);
        if (q != 0.0) cuts.push_back(qc / q);
        std::sort(cuts.begin(), cuts.end());
      }
    }
    std::vector<double> edges;
    edges.push_back(-std::numeric_limits<double>::infinity());
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(std::numeric_limits<double>::infinity());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double p1 = interval_mass(m1, s1, edges[k], edges[k + 1]);
      const double p2 = interval_mass(m2, s2, edges[k], edges[k + 1]);
      total += std::abs(p1 - p2);
    }
    return {std::min(1.0, 0.5 * total), DistanceMethod::exact_1d, std::nullopt};
  }
  if (mc_size < 2) throw std::invalid_argument("tv_gaussians: mc_size must be >= 2");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Index i = 0; i < mc_size; ++i) {
    const VectorXd x = g1.sample(rng);
    const double t = 0.5 * std::abs(1.0 - std::exp(g2.log_density(x) - g1.log_density(x)));
    sum += t;
    sum_sq += t * t;
  }
  const double n = static_cast<double>(mc_size);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, DistanceMethod::monte_carlo, std::sqrt(var / n)};
}

namespace {

double atan_root(const double* xs, Index stride, const double* ws, Index count) {
  auto residual = [&](double c) {
    double r = 0.0;
    for (Index i = 0; i < count; ++i) r += ws[i] * std::atan(xs[i * stride] - c);
    return r;
  };
  double lo = xs[0];
  double hi = xs[0];
  for (Index i = 1; i < count; ++i) {
    lo = std::min(lo, xs[i * stride]);
    hi = std::max(hi, xs[i * stride]);
  }
  if (lo == hi) return lo;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) <= 1e-13 || mid <= lo || mid >= hi) return mid;
    if (r > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Nodes and probability weights of the order-k Gauss-Hermite rule for N(0, 1).
void gauss_hermite(int k, std::vector<double>& nodes, std::vector<double>& weights) {
  MatrixXd jac = MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) {
    jac(i, i - 1) = std::sqrt(static_cast<double>(i));
    jac(i - 1, i) = jac(i, i - 1);
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(jac);
  nodes.resize(static_cast<std::size_t>(k));
  weights.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = v * v;
  }
  for (int i = 0; i < k / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(k - 1 - i);
    const double x = 0.5 * (nodes[hi] - nodes[lo]);
    const double w = 0.5 * (weights[hi] + weights[lo]);
    nodes[lo] = -x;
    nodes[hi] = x;
    weights[lo] = w;
    weights[hi] = w;
  }
  if (k % 2 == 1) nodes[static_cast<std::size_t>(k / 2)] = 0.0;
}

}  // namespace

VectorXd central_value(const WeightedSample& a) {
  VectorXd c(a.dim());
  for (Index r = 0; r < a.dim(); ++r) {
    c[r] = atan_root(a.points().data() + r, a.dim(), a.weights().data(), a.size());
  }
  return c;
}

VectorXd central_value(const GaussianMeasure& g) {
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_hermite(41, nodes, weights);
  VectorXd c(g.dim());
  std::vector<double> xs(nodes.size());
  for (Index r = 0; r < g.dim(); ++r) {
    const double s = std::sqrt(g.covariance()(r, r));
    for (std::size_t k = 0; k < nodes.size(); ++k) xs[k] = g.mean()[r] + s * nodes[k];
    c[r] = atan_root(xs.data(), 1, weights.data(), static_cast<Index>(xs.size()));
  }
  return c;
}

void write_csv(std::ostream& os, const WeightedSample& sample) {
  os << "dim," << sample.dim() << '\n';
  for (Index i = 0; i < sample.size(); ++i) {
    os << fmt17(sample.weight(i));
    for (Index r = 0; r < sample.dim(); ++r) os << ',' << fmt17(sample.points()(r, i));
    os << '\n';
  }
}

WeightedSample read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("dim,", 0) != 0) {
    throw std::invalid_argument("read_csv: missing `dim,<p>` header");
  }
  const long dim = std::stol(line.substr(4));
  if (dim < 1) throw std::invalid_argument("read_csv: dimension must be positive");
  std::vector<double> w;
  std::vector<double> x;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument("read_csv: bad number on line " + std::to_string(row));
      }
    }
    if (static_cast<long>(vals.size()) != dim + 1) {
      throw std::invalid_argument("read_csv: wrong field count on line " + std::to_string(row));
    }
    w.push_back(vals[0]);
    x.insert(x.end(), vals.begin() + 1, vals.end());
  }
  const auto n = static_cast<Index>(w.size());
  MatrixXd pts = Eigen::Map<MatrixXd>(x.data(), dim, n);
  return WeightedSample(std::move(pts), Eigen::Map<VectorXd>(w.data(), n));
}

}  // namespace lcmc
