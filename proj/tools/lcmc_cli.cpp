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

// lcmc: run risk experiments, the asymptotic check suite, the inconsistency
// demos and subadditivity audits from the command line.
//
// Exit status: 0 when every enabled assertion passes, 1 when one fails or
// the computation errors, 2 for invalid configuration or arguments.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcmc/checks.hpp"
#include "lcmc/config.hpp"
#include "lcmc/demos.hpp"
#include "lcmc/harness.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
};

lcmc::ExperimentConfig load_config(const CommonOptions& opts) {
  lcmc::ConfigEntries entries;
  if (!opts.config_path.empty()) entries = lcmc::parse_config_file(opts.config_path);
  for (const auto& o : opts.overrides) lcmc::apply_override(entries, o);
  return lcmc::build_config(entries);
}

std::string output_path(const CommonOptions& opts, const lcmc::ExperimentConfig& cfg,
                        const std::string& command) {
  if (!opts.output.empty()) return opts.output;
  if (!cfg.output.empty()) return cfg.output;
  const char* dir = std::getenv("LCMC_OUTPUT_DIR");
  const std::string base = (dir != nullptr && *dir != '\0') ? dir : ".";
  return base + "/" + command + ".csv";
}

template <class Writer>
void write_file(const std::string& path, Writer writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  writer(os);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

int cmd_run(const CommonOptions& opts) {
  const lcmc::ExperimentConfig cfg = load_config(opts);
  const lcmc::RiskReport report = lcmc::estimate_risk(cfg);
  const std::string path = output_path(opts, cfg, "run");
  write_file(path, [&](std::ostream& os) { lcmc::write_risk_csv(os, report); });

  bool ok = true;
  std::printf("config %s  kernel=%s start=%s estimator=%s localized=%s\n", cfg.hash().c_str(),
              lcmc::to_string(cfg.kernel).c_str(), lcmc::to_string(cfg.start).c_str(),
              lcmc::to_string(cfg.estimator.kind).c_str(), cfg.localized ? "yes" : "no");
  std::printf("%8s %8s %12s %12s %12s\n", "n", "m", "risk", "stderr", "floor");
  for (const auto& row : report.rows) {
    std::printf("%8ld %8ld %12.6f %12.6f %12.6f", static_cast<long>(row.n), static_cast<long>(row.m),
                row.risk_mean, row.risk_stderr, row.floor);
    if (row.mass_deviation) std::printf("  |mass-1|=%.6f", *row.mass_deviation);
    std::printf("\n");
    if (row.risk_mean < 0.0) ok = false;
    if (cfg.truncation == 1.0 && row.risk_mean > 1.0 + 3.0 * row.risk_stderr) ok = false;
  }
  std::printf("wrote %s\n", path.c_str());
  return ok ? 0 : kExitFail;
}

int cmd_check(const CommonOptions& opts) {
  const lcmc::ExperimentConfig cfg = load_config(opts);
  const auto results = lcmc::run_check_suite(cfg);
  const std::string path = output_path(opts, cfg, "check");
  write_file(path, [&](std::ostream& os) { lcmc::write_check_csv(os, results); });
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%-4s %-40s %.6g (threshold %.6g)\n", r.pass ? "ok" : "FAIL", r.name.c_str(), r.statistic,
                r.threshold);
    ok = ok && r.pass;
  }
  std::printf("wrote %s\n", path.c_str());
  return ok ? 0 : kExitFail;
}

struct DemoOptions {
  std::string scenario;
  long n = 0;
  long m = 0;
  int replicates = 0;
};

int cmd_demo(const CommonOptions& opts, const DemoOptions& demo) {
  const lcmc::ExperimentConfig cfg = load_config(opts);
  const std::string name = !demo.scenario.empty() ? demo.scenario : cfg.demo;
  if (name.empty()) throw lcmc::ConfigError(0, "demo", "no scenario given (--scenario or demo = ...)");
  lcmc::DemoScenario scenario;
  try {
    scenario = lcmc::parse_demo_scenario(name);
  } catch (const std::invalid_argument& e) {
    throw lcmc::ConfigError(0, "demo", e.what());
  }
  const long n = demo.n > 0 ? demo.n : static_cast<long>(cfg.n_grid.front());
  const long m = demo.m > 0 ? demo.m : static_cast<long>(cfg.m_grid.front());
  const int reps = demo.replicates > 0 ? demo.replicates : 200;
  if (reps < 2) throw lcmc::ConfigError(0, "replicates", "must be >= 2");
  if (scenario == lcmc::DemoScenario::high_dim_is && n < 2) {
    throw lcmc::ConfigError(0, "n", "high_dim_is needs n >= 2");
  }
  const lcmc::DemoReport rep = lcmc::run_demo(scenario, n, m, reps, cfg.seed);
  const std::string path = output_path(opts, cfg, "demo");
  write_file(path, [&](std::ostream& os) {
    os << "scenario,n,m,replicates,witness_mean,witness_stderr,analytic,threshold,fraction_above,seed\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%ld,%ld,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%llu\n",
                  lcmc::to_string(scenario).c_str(), n, m, reps, rep.risk.value, rep.risk.stderr_value.value_or(0.0),
                  rep.analytic, rep.threshold, rep.fraction_above, static_cast<unsigned long long>(cfg.seed));
    os << buf;
  });
  const bool ok = rep.fraction_above >= 0.95;
  std::printf("scenario %s  n=%ld m=%ld replicates=%d\n", lcmc::to_string(scenario).c_str(), n, m, reps);
  std::printf("%s %.6f\n", scenario == lcmc::DemoScenario::high_dim_is ? "analytic bound" : "analytic floor",
              rep.analytic);
  std::printf("witness statistic %.4f +- %.4f\n", rep.risk.value, rep.risk.stderr_value.value_or(0.0));
  std::printf("replicates above 0.9 x analytic: %.1f%% (%s)\n", 100.0 * rep.fraction_above,
              ok ? "ok" : "below 95%");
  std::printf("wrote %s\n", path.c_str());
  return ok ? 0 : kExitFail;
}

int cmd_audit(const CommonOptions& opts, std::vector<long> ks, std::vector<long> ms) {
  const lcmc::ExperimentConfig cfg = load_config(opts);
  if (ks.size() != ms.size() || ks.empty()) {
    throw lcmc::ConfigError(0, "k", "give the same number of --k and --m values");
  }
  std::vector<lcmc::AuditResult> results;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1 || ks[i] > ms[i]) throw lcmc::ConfigError(0, "k", "need 1 <= k <= m");
    if (cfg.start != lcmc::StartMode::stationary) {
      throw lcmc::ConfigError(0, "start", "the audit needs start = stationary");
    }
    results.push_back(lcmc::subadditivity_audit(cfg, ks[i], ms[i]));
  }
  const std::string path = output_path(opts, cfg, "audit");
  write_file(path, [&](std::ostream& os) { lcmc::write_audit_csv(os, results); });
  bool ok = true;
  for (const auto& a : results) {
    std::printf("%-4s k=%ld m=%ld  R_m=%.5f  R_k + k/m=%.5f  margin=%.5f\n", a.pass ? "ok" : "FAIL",
                static_cast<long>(a.k), static_cast<long>(a.m), a.risk_m,
                a.risk_k + static_cast<double>(a.k) / static_cast<double>(a.m), a.margin);
    ok = ok && a.pass;
  }
  std::printf("wrote %s\n", path.c_str());
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk, consistency and Gibbs-sampler asymptotics test bench"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("-c,--config", common.config_path, "key = value config file");
    if (config_required) opt->required();
    sub->add_option("--set", common.overrides, "override a config key (key=value)");
    sub->add_option("-o,--output", common.output, "CSV output path");
  };

  auto* run = app.add_subcommand("run", "estimate risk curves from a config");
  add_common(run, true);

  auto* check = app.add_subcommand("check", "run the identity / CLT / BvM / QMD check suite");
  add_common(check, false);
  std::string seed_text;
  check->add_option("--seed", seed_text, "master seed");

  auto* demo = app.add_subcommand("demo", "run an inconsistency demo");
  add_common(demo, false);
  DemoOptions demo_opts;
  demo->add_option("--scenario", demo_opts.scenario, "high_dim_is or shrinking_mh");
  demo->add_option("--n", demo_opts.n, "dimension (high_dim_is) or scale (shrinking_mh)");
  demo->add_option("--m", demo_opts.m, "chain length");
  demo->add_option("--replicates", demo_opts.replicates, "independent runs (default 200)");
  demo->add_option("--seed", seed_text, "master seed");

  auto* audit = app.add_subcommand("audit", "check R_m <= R_k + k/m");
  add_common(audit, true);
  std::vector<long> ks;
  std::vector<long> ms;
  audit->add_option("--k", ks, "shorter length(s)")->required();
  audit->add_option("--m", ms, "longer length(s)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (!seed_text.empty()) common.overrides.push_back("seed=" + seed_text);

  try {
    if (*run) return cmd_run(common);
    if (*check) return cmd_check(common);
    if (*demo) return cmd_demo(common, demo_opts);
    if (*audit) return cmd_audit(common, ks, ms);
  } catch (const lcmc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitConfig;
}
