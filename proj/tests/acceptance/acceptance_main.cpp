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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "dense_lp.hpp"
#include "lcmc/asymptotics.hpp"
#include "lcmc/config.hpp"
#include "lcmc/demos.hpp"
#include "lcmc/harness.hpp"
#include "lcmc/measures.hpp"
#include "lcmc/models.hpp"

namespace {

using lcmc::Index;
using lcmc::MatrixXd;
using lcmc::NormalAugmentationModel;
using lcmc::RngStream;
using lcmc::VectorXd;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Verdict()> body;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

MatrixXd random_spd(RngStream& rng, Index p) {
  const MatrixXd a = rng.normal_matrix(p, p);
  return a * a.transpose() + 0.05 * MatrixXd::Identity(p, p);
}

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

lcmc::ExperimentConfig load(const std::string& name) {
  return lcmc::build_config(lcmc::parse_config_file(std::string(LCMC_CONFIG_DIR) + "/" + name));
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v, const char* f = "%.4f") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(f, v[i]);
  return out;
}

Verdict stationarity_identity() {
  RngStream rng = RngStream::derive(101, lcmc::Purpose::check);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index p = 1 + t % 4;
    const MatrixXd i = random_spd(rng, p);
    const MatrixXd j = random_spd(rng, p);
    worst = std::max(worst, lcmc::stationarity_identity_deviation({i, j, i + j}));
  }
  return {worst <= 1e-10, "max deviation " + fmt("%.3g", worst) + " over 100 triples (tol 1e-10)"};
}

Verdict transport_oracle() {
  RngStream rng = RngStream::derive(102, lcmc::Purpose::check);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Index p = t < 100 ? 1 : 2;
    const Index na = 1 + static_cast<Index>(rng.uniform() * 6.0);
    const Index nb = 1 + static_cast<Index>(rng.uniform() * 6.0);
    const MatrixXd xa = rng.normal_matrix(p, na);
    const MatrixXd xb = rng.normal_matrix(p, nb);
    VectorXd wa(na);
    VectorXd wb(nb);
    for (Index i = 0; i < na; ++i) wa[i] = 0.05 + rng.uniform();
    for (Index i = 0; i < nb; ++i) wb[i] = 0.05 + rng.uniform();
    wa /= wa.sum();
    wb /= wb.sum();
    MatrixXd cost(na, nb);
    for (Index i = 0; i < na; ++i) {
      for (Index j = 0; j < nb; ++j) cost(i, j) = std::min((xa.col(i) - xb.col(j)).norm(), 1.0);
    }
    const double oracle = lcmc::testing::dense_transport(cost, wa, wb);
    const double got = lcmc::w1_truncated(lcmc::WeightedSample(xa, wa), lcmc::WeightedSample(xb, wb)).value;
    worst = std::max(worst, std::abs(got - oracle));
  }
  return {worst <= 1e-9, "max |exact - dense LP| " + fmt("%.3g", worst) + " over 100 1D + 100 2D instances"};
}

Verdict subadditivity() {
  const auto cfg = load("subadditivity.conf");
  bool ok = true;
  std::string detail;
  for (Index k : {50, 100}) {
    const auto a = lcmc::subadditivity_audit(cfg, k, 1000);
    ok = ok && a.pass;
    detail += "(k=" + std::to_string(k) + ",m=1000) R_m=" + fmt("%.4f", a.risk_m) +
              " R_k+k/m=" + fmt("%.4f", a.risk_k + static_cast<double>(k) / 1000.0) +
              " margin=" + fmt("%.4f", a.margin) + "; ";
  }
  return {ok, detail};
}

Verdict high_dim_is() {
  const auto rep = lcmc::run_demo(lcmc::DemoScenario::high_dim_is, 200, 5, 200, 104);
  return {rep.fraction_above >= 0.95,
          "bound " + fmt("%.4f", rep.analytic) + ", threshold " + fmt("%.4f", rep.threshold) +
              ", above in " + fmt("%.1f", 100.0 * rep.fraction_above) + "% of 200 (mean witness " +
              fmt("%.4f", rep.risk.value) + ")"};
}

Verdict shrinking_mh() {
  const auto rep = lcmc::run_demo(lcmc::DemoScenario::shrinking_mh, 10000, 10, 200, 105);
  return {rep.fraction_above >= 0.95,
          "floor " + fmt("%.4f", rep.analytic) + ", threshold " + fmt("%.4f", rep.threshold) +
              ", above in " + fmt("%.1f", 100.0 * rep.fraction_above) + "% of 200"};
}

Verdict partial_score_clt() {
  MatrixXd sy(2, 2);
  sy << 1.0, 0.3, 0.3, 0.6;
  MatrixXd sx(2, 2);
  sx << 0.8, -0.2, -0.2, 1.1;
  const std::vector<NormalAugmentationModel> models = {
      NormalAugmentationModel(scalar(1.0), scalar(1.0), VectorXd::Zero(1), scalar(100.0)),
      NormalAugmentationModel(sy, sx, VectorXd::Zero(2), 100.0 * MatrixXd::Identity(2, 2)),
  };
  bool ok = true;
  std::string detail;
  for (const auto& m : models) {
    const VectorXd theta = VectorXd::Constant(m.dim(), 0.5);
    const auto s = lcmc::partial_score_covariance(m, theta, 500, 20, 2000, 106);
    const MatrixXd j = m.info_latent(theta);
    double worst_z = 0.0;
    for (Index r = 0; r < j.rows(); ++r) {
      for (Index c = 0; c < j.cols(); ++c) {
        worst_z = std::max(worst_z, std::abs(s.cov(r, c) - j(r, c)) / s.cov_stderr(r, c));
      }
    }
    ok = ok && worst_z <= 3.0;
    detail += "p=" + std::to_string(m.dim()) + " max |cov - J|/se " + fmt("%.2f", worst_z) + "; ";
  }
  return {ok, detail};
}

Verdict bvm() {
  const NormalAugmentationModel m(scalar(1.0), scalar(1.0), VectorXd::Zero(1), scalar(1.0));
  std::vector<double> gaps;
  for (Index n : {100, 1000, 10000}) {
    double sum = 0.0;
    const int datasets = 20;
    for (int d = 0; d < datasets; ++d) {
      RngStream rng = RngStream::derive(107, lcmc::Purpose::data,
                                        {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)});
      sum += lcmc::bvm_gap(m, VectorXd::Constant(1, 0.5), n, rng).value;
    }
    gaps.push_back(sum / datasets);
  }
  return {strictly_decreasing(gaps) && gaps.back() <= 0.05,
          "mean TV over 20 datasets at n=1e2,1e3,1e4: " + join(gaps, "%.5f")};
}

Verdict local_consistency() {
  auto cfg = load("local_consistency.conf");
  const auto stationary = lcmc::estimate_risk(cfg);
  cfg.start = lcmc::StartMode::perturbed;
  const auto perturbed = lcmc::estimate_risk(cfg);
  std::vector<double> risk;
  bool shift_ok = true;
  double worst_shift = 0.0;
  for (Index n : cfg.n_grid) {
    const auto& a = stationary.at(n, 2000);
    const auto& b = perturbed.at(n, 2000);
    risk.push_back(a.risk_mean);
    const double z = std::abs(a.risk_mean - b.risk_mean) /
                     std::sqrt(a.risk_stderr * a.risk_stderr + b.risk_stderr * b.risk_stderr);
    worst_shift = std::max(worst_shift, z);
    shift_ok = shift_ok && z < 3.0;
  }
  const auto& last = stationary.at(cfg.n_grid.back(), 2000);
  const bool near_floor = last.risk_mean <= last.floor + 0.05;
  return {strictly_decreasing(risk) && near_floor && shift_ok,
          "risk " + join(risk) + ", floor at n=2000 " + fmt("%.4f", last.floor) +
              ", max perturbed shift " + fmt("%.2f", worst_shift) + " combined se"};
}

Verdict surrogate_gap() {
  const NormalAugmentationModel m(scalar(1.0), scalar(1.0), VectorXd::Zero(1), scalar(0.01));
  const std::vector<double> grid = {-1.0, 0.0, 1.0};
  std::vector<std::vector<double>> gaps(grid.size());
  bool near_floor = true;
  std::string last;
  for (Index n : {100, 1000, 10000}) {
    const auto pts = lcmc::kernel_surrogate_gap(m, VectorXd::Constant(1, 0.5), n, grid, 10000, 109);
    for (std::size_t g = 0; g < grid.size(); ++g) gaps[g].push_back(pts[g].gap.value);
    if (n == 10000) {
      for (const auto& p : pts) {
        near_floor = near_floor && p.gap.value <= p.floor + 0.05;
        last += fmt("%.4f", p.gap.value) + "/" + fmt("%.4f", p.floor) + " ";
      }
    }
  }
  bool decreasing = true;
  std::string detail;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    decreasing = decreasing && strictly_decreasing(gaps[g]);
    detail += "u=" + fmt("%g", grid[g]) + ": " + join(gaps[g]) + "; ";
  }
  return {decreasing && near_floor, detail + "n=1e4 gap/floor " + last};
}

Verdict qmd() {
  const NormalAugmentationModel m(scalar(1.0), scalar(1.0), VectorXd::Zero(1), scalar(1.0));
  std::vector<double> ratios;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    ratios.push_back(lcmc::qmd_residual(m, VectorXd::Constant(1, 0.5), VectorXd::Constant(1, h)).value / (h * h));
  }
  const double final_over_initial = ratios.back() / ratios.front();
  return {strictly_decreasing(ratios) && final_over_initial <= 0.1,
          "residual/h^2 " + join(ratios, "%.3g") + ", final/initial " + fmt("%.4f", final_over_initial)};
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" LCMC_CLI_PATH "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("lcmc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string run_args = "run --config '" LCMC_CONFIG_DIR "/subadditivity.conf' --set m=200,1000 -o ";
  const std::string check_args = "check --seed 20240601 -o ";
  const int c1 = run_cli(check_args + (dir / "check1.csv").string());
  const int c2 = run_cli(check_args + (dir / "check2.csv").string());
  const int r1 = run_cli(run_args + (dir / "run1.csv").string());
  const int r2 = run_cli(run_args + (dir / "run2.csv").string());
  const std::string ch1 = slurp(dir / "check1.csv");
  const std::string ru1 = slurp(dir / "run1.csv");
  const bool same_check = !ch1.empty() && ch1 == slurp(dir / "check2.csv");
  const bool same_run = !ru1.empty() && ru1 == slurp(dir / "run2.csv");
  fs::remove_all(dir);
  const bool exits_ok = c1 == 0 && c2 == 0 && r1 == 0 && r2 == 0;
  return {same_check && same_run && exits_ok,
          std::string("check csv ") + (same_check ? "identical" : "DIFFERS") + ", run csv " +
              (same_run ? "identical" : "DIFFERS") + ", exit codes " + std::to_string(c1) +
              std::to_string(c2) + std::to_string(r1) + std::to_string(r2)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "stationarity identity", 1.0, stationarity_identity},
      {2, "transport oracle equivalence", 10.0, transport_oracle},
      {3, "subadditivity audit", 120.0, subadditivity},
      {4, "high-dimensional IS counterexample", 60.0, high_dim_is},
      {5, "shrinking-proposal MH counterexample", 60.0, shrinking_mh},
      {6, "partial-score CLT", 120.0, partial_score_clt},
      {7, "Bernstein-von Mises gap", 30.0, bvm},
      {8, "local consistency", 600.0, local_consistency},
      {9, "Gibbs vs surrogate kernel gap", 180.0, surrogate_gap},
      {10, "QMD residual", 10.0, qmd},
      {11, "determinism", 600.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s [%2d] %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                v.detail.c_str(), secs, c.time_limit_s, in_time ? "" : ", OVER TIME");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
