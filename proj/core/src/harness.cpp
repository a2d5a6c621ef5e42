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

#include "lcmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "lcmc/asymptotics.hpp"
#include "lcmc/estimators.hpp"
#include "lcmc/kernels.hpp"
#include "lcmc/measures.hpp"

namespace lcmc {

RiskError::RiskError(Index n_, Index m_, int replicate_, int chain_, const std::string& what)
    : std::runtime_error("risk computation failed at n=" + std::to_string(n_) + " m=" +
                         std::to_string(m_) + " replicate=" + std::to_string(replicate_) +
                         " chain=" + std::to_string(chain_) + ": " + what),
      n(n_),
      m(m_),
      replicate(replicate_),
      chain(chain_) {}

void RiskReport::merge(const RiskReport& other) {
  const std::string* hash = rows.empty() ? nullptr : &rows.front().config_hash;
  for (const auto& row : other.rows) {
    if (hash == nullptr) hash = &row.config_hash;
    if (row.config_hash != *hash) {
      throw std::invalid_argument("RiskReport::merge: config hash " + row.config_hash +
                                  " does not match " + *hash);
    }
  }
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

const RiskRow& RiskReport::at(Index n, Index m) const {
  for (const auto& row : rows) {
    if (row.n == n && row.m == m) return row;
  }
  throw std::out_of_range("RiskReport: no row for n=" + std::to_string(n) + " m=" + std::to_string(m));
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
// Exceptions are rethrown in index order after all tasks finish.
template <class Body>
void parallel_for(int count, Body body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(std::max(count, 1))));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ReplicateResult {
  std::vector<double> risk;       // per m, mean over chains
  std::vector<double> floor;      // per m
  std::vector<double> mass_dev;   // per m, mean over chains
};

std::uint64_t u64(Index v) { return static_cast<std::uint64_t>(v); }

ReplicateResult run_replicate(const ExperimentConfig& cfg,
                              const std::shared_ptr<const NormalAugmentationModel>& model_ptr, Index n,
                              int r, Index max_m) {
  const NormalAugmentationModel& model = *model_ptr;
  const std::uint64_t seed = cfg.seed;
  const std::uint64_t rep = static_cast<std::uint64_t>(r);
  ReplicateResult out;
  const std::size_t nm = cfg.m_grid.size();
  out.risk.assign(nm, 0.0);
  out.floor.assign(nm, 0.0);
  out.mass_dev.assign(nm, 0.0);

  auto fail = [&](Index m, int chain, const std::exception& e) -> RiskError {
    return RiskError(n, m, r, chain, e.what());
  };

  Dataset data;
  std::shared_ptr<const MatrixXd> x;
  VectorXd theta_hat;
  std::optional<GaussianMeasure> posterior;
  std::optional<GaussianMeasure> target;
  std::optional<LocalizationMap> map;
  std::optional<WeightedSample> ref;
  try {
    RngStream data_rng = RngStream::derive(seed, Purpose::data, {u64(n), rep});
    const VectorXd theta = cfg.data_mode == DataMode::fixed ? cfg.theta_true : model.prior().sample(data_rng);
    data = model.sample_data(theta, n, data_rng);
    x = std::make_shared<const MatrixXd>(data.x);
    posterior.emplace(model.posterior_marginal(data.x));
    theta_hat = central_value(*posterior);
    GaussianMeasure reference =
        cfg.reference == ReferenceKind::posterior
            ? *posterior
            : GaussianMeasure(theta_hat, spd_inverse(model.info_marginal(theta_hat), "I") /
                                             static_cast<double>(n));
    if (cfg.localized) {
      map.emplace(LocalizationMap::root_n(theta_hat, static_cast<double>(n)));
      reference = localize(reference, *map);
    }
    target.emplace(reference);
    RngStream ref_rng = RngStream::derive(seed, Purpose::reference, {u64(n), rep});
    ref.emplace(WeightedSample::uniform(target->sample(cfg.ref_size, ref_rng)));
  } catch (const std::exception& e) {
    throw fail(0, -1, e);
  }

  const TransportOptions topts{cfg.truncation, 4096};
  for (std::size_t k = 0; k < nm; ++k) {
    const Index m = cfg.m_grid[k];
    try {
      RngStream floor_rng = RngStream::derive(seed, Purpose::floor, {u64(n), rep, u64(m)});
      out.floor[k] = w1_truncated(WeightedSample::uniform(target->sample(m, floor_rng)), *ref, topts).value;
    } catch (const std::exception& e) {
      throw fail(m, -1, e);
    }
  }

  // Kernel and its stationary law.
  TransitionKernelSpec kernel;
  std::optional<GaussianMeasure> stationary;
  std::optional<GaussianMeasure> iid_q;
  try {
    switch (cfg.kernel) {
      case KernelKind::gibbs: {
        kernel = GibbsKernel{model_ptr, x};
        stationary.emplace(*posterior);
        break;
      }
      case KernelKind::approx_gibbs: {
        const InfoTriple info = InfoTriple::from_model(model, theta_hat);
        ApproxGibbsKernel k(theta_hat, info.info_i, info.info_j, info.info_k, static_cast<double>(n));
        stationary.emplace(k.stationary_law());
        kernel = std::move(k);
        break;
      }
      case KernelKind::mh: {
        const GaussianMeasure post = *posterior;
        const MatrixXd step_chol = std::sqrt(cfg.mh_scale) * post.cholesky();
        MhKernel k;
        k.log_target = [post](const VectorXd& t) { return post.log_density(t); };
        k.propose = [step_chol](const VectorXd& from, RngStream& rng) {
          return VectorXd(from + step_chol * rng.normal_vector(from.size()));
        };
        kernel = std::move(k);
        stationary.emplace(*posterior);
        break;
      }
      case KernelKind::iid: {
        iid_q.emplace(posterior->mean(), cfg.iid_scale * posterior->covariance());
        const GaussianMeasure q = *iid_q;
        kernel = IidKernel{[q](RngStream& rng) { return q.sample(rng); }};
        stationary.emplace(*iid_q);
        break;
      }
    }
  } catch (const std::exception& e) {
    throw fail(0, -1, e);
  }

  EstimatorContext ctx;
  ctx.model = &model;
  ctx.x = x.get();
  if (iid_q) {
    const GaussianMeasure post = *posterior;
    const GaussianMeasure q = *iid_q;
    ctx.ratio = [post, q](const VectorXd& t) { return std::exp(post.log_density(t) - q.log_density(t)); };
  }
  RunOptions ropts;
  ropts.keep_latents = cfg.estimator.kind == EstimatorKind::rao_blackwell;
  const GaussianMeasure q_shape = GaussianMeasure::standard(model.dim());

  for (int c = 0; c < cfg.chains_per_replicate; ++c) {
    const std::uint64_t ch = static_cast<std::uint64_t>(c);
    ChainPath path;
    try {
      RngStream init_rng = RngStream::derive(seed, Purpose::initial, {u64(n), rep, ch});
      const VectorXd initial = cfg.start == StartMode::stationary
                                   ? stationary->sample(init_rng)
                                   : perturbed_start(model.point_estimate(data.x), static_cast<double>(n),
                                                     q_shape, init_rng);
      RngStream chain_rng = RngStream::derive(seed, Purpose::chain, {u64(n), rep, ch});
      path = run_chain(kernel, initial, max_m, chain_rng, ropts);
    } catch (const std::exception& e) {
      throw fail(max_m, c, e);
    }
    for (std::size_t k = 0; k < nm; ++k) {
      const Index m = cfg.m_grid[k];
      try {
        RngStream est_rng = RngStream::derive(seed, Purpose::estimator, {u64(n), rep, ch, u64(m)});
        ctx.rng = &est_rng;
        WeightedSample e = apply_estimator(cfg.estimator, path, m, ctx);
        if (cfg.estimator.kind == EstimatorKind::importance) {
          const WeightedSample raw = importance_weighted(path, m, ctx.ratio, IsMode::raw);
          out.mass_dev[k] += std::abs(raw.total_mass() - 1.0);
          if (cfg.estimator.is_mode == IsMode::raw) e = raw.renormalized();
        }
        if (map) e = localize(e, *map);
        out.risk[k] += w1_truncated(e, *ref, topts).value;
      } catch (const std::exception& e) {
        throw fail(m, c, e);
      }
    }
  }
  for (std::size_t k = 0; k < nm; ++k) {
    out.risk[k] /= cfg.chains_per_replicate;
    out.mass_dev[k] /= cfg.chains_per_replicate;
  }
  return out;
}

void mean_and_stderr(const std::vector<double>& v, double& mean, double& se) {
  const double k = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  mean = sum / k;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = v.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
}

}  // namespace

std::shared_ptr<const NormalAugmentationModel> make_model(const ExperimentConfig& config) {
  if (config.model != "normal_augmentation") {
    throw ConfigError(0, "model", "unsupported model '" + config.model + "'");
  }
  try {
    return std::make_shared<const NormalAugmentationModel>(config.sigma_y, config.sigma_x,
                                                           config.prior_mean, config.prior_cov);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "model", e.what());
  }
}

void write_risk_csv(std::ostream& os, const RiskReport& report) {
  os << "n,m,estimator,localized,risk_mean,risk_stderr,floor,replicates,chains,seed,config_hash\n";
  for (const auto& r : report.rows) {
    os << r.n << ',' << r.m << ',' << r.estimator << ',' << (r.localized ? "true" : "false") << ','
       << num(r.risk_mean) << ',' << num(r.risk_stderr) << ',' << num(r.floor) << ',' << r.replicates
       << ',' << r.chains << ',' << r.seed << ',' << r.config_hash << '\n';
  }
}

RiskReport estimate_risk(const ExperimentConfig& config) {
  const auto model = make_model(config);
  const Index max_m = *std::max_element(config.m_grid.begin(), config.m_grid.end());
  const std::string hash = config.hash();
  RiskReport report;
  for (Index n : config.n_grid) {
    std::vector<ReplicateResult> results(static_cast<std::size_t>(config.replicates));
    parallel_for(config.replicates, [&](int r) {
      results[static_cast<std::size_t>(r)] = run_replicate(config, model, n, r, max_m);
    });
    for (std::size_t k = 0; k < config.m_grid.size(); ++k) {
      RiskRow row;
      row.n = n;
      row.m = config.m_grid[k];
      row.estimator = to_string(config.estimator.kind);
      row.localized = config.localized;
      row.replicates = config.replicates;
      row.chains = config.chains_per_replicate;
      row.seed = config.seed;
      row.config_hash = hash;
      std::vector<double> floors;
      std::vector<double> masses;
      for (const auto& res : results) {
        row.per_replicate.push_back(res.risk[k]);
        floors.push_back(res.floor[k]);
        masses.push_back(res.mass_dev[k]);
      }
      mean_and_stderr(row.per_replicate, row.risk_mean, row.risk_stderr);
      double unused = 0.0;
      mean_and_stderr(floors, row.floor, unused);
      if (config.estimator.kind == EstimatorKind::importance) {
        double md = 0.0;
        mean_and_stderr(masses, md, unused);
        row.mass_deviation = md;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

AuditResult subadditivity_audit(const ExperimentConfig& config, Index k, Index m) {
  if (config.start != StartMode::stationary) {
    throw std::invalid_argument("subadditivity_audit: the inequality needs a stationary start");
  }
  if (k < 1 || k > m) throw std::invalid_argument("subadditivity_audit: need 1 <= k <= m");
  if (config.n_grid.size() != 1) throw std::invalid_argument("subadditivity_audit: needs a single n");
  ExperimentConfig cfg = config;
  cfg.m_grid = k == m ? std::vector<Index>{m} : std::vector<Index>{k, m};
  const RiskReport rep = estimate_risk(cfg);
  const Index n = cfg.n_grid.front();
  const RiskRow& rk = rep.at(n, k);
  const RiskRow& rm = rep.at(n, m);
  AuditResult a;
  a.k = k;
  a.m = m;
  a.risk_k = rk.risk_mean;
  a.stderr_k = rk.risk_stderr;
  a.risk_m = rm.risk_mean;
  a.stderr_m = rm.risk_stderr;
  a.margin = a.risk_k + static_cast<double>(k) / static_cast<double>(m) +
             3.0 * (a.stderr_k + a.stderr_m) - a.risk_m;
  a.pass = a.margin >= 0.0;
  a.config_hash = rk.config_hash;
  return a;
}

void write_audit_csv(std::ostream& os, const std::vector<AuditResult>& results) {
  os << "k,m,risk_k,stderr_k,risk_m,stderr_m,margin,pass,config_hash\n";
  for (const auto& a : results) {
    os << a.k << ',' << a.m << ',' << num(a.risk_k) << ',' << num(a.stderr_k) << ',' << num(a.risk_m)
       << ',' << num(a.stderr_m) << ',' << num(a.margin) << ',' << (a.pass ? "true" : "false") << ','
       << a.config_hash << '\n';
  }
}

}  // namespace lcmc
