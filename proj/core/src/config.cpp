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

#include "lcmc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace lcmc {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error(
          (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
          (key.empty() ? std::string() : "key '" + key + "': ") + message),
      line_(line),
      key_(std::move(key)) {}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::gibbs: return "gibbs";
    case KernelKind::approx_gibbs: return "approx_gibbs";
    case KernelKind::mh: return "mh";
    case KernelKind::iid: return "iid";
  }
  return "unknown";
}

std::string to_string(StartMode s) { return s == StartMode::stationary ? "stationary" : "perturbed"; }
std::string to_string(DataMode d) { return d == DataMode::fixed ? "fixed" : "prior_predictive"; }
std::string to_string(ReferenceKind r) { return r == ReferenceKind::posterior ? "posterior" : "bvm"; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

class Reader {
 public:
  explicit Reader(const ConfigEntries& e) : entries_(e) {}

  bool has(const std::string& key) const { return entries_.values.count(key) != 0; }
  int line(const std::string& key) const {
    auto it = entries_.values.find(key);
    return it == entries_.values.end() ? 0 : it->second.second;
  }
  const std::string& raw(const std::string& key) const { return entries_.values.at(key).first; }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(line(key), key, msg);
  }

  double to_double(const std::string& key, const std::string& text) const {
    const std::string t = trim(text);
    if (t == "inf" || t == "unbounded") return std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) fail(key, "expected a number, got '" + t + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(key, "expected a number, got '" + t + "'");
    }
  }

  long long to_integer(const std::string& key, const std::string& text) const {
    const std::string t = trim(text);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) fail(key, "expected an integer, got '" + t + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(key, "expected an integer, got '" + t + "'");
    }
  }

  double real(const std::string& key, double fallback) const {
    return has(key) ? to_double(key, raw(key)) : fallback;
  }

  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? to_integer(key, raw(key)) : fallback;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(raw(key))) out.push_back(to_double(key, item));
    if (out.empty()) fail(key, "empty list");
    return out;
  }

  std::vector<Index> positive_integers(const std::string& key) const {
    std::vector<Index> out;
    for (const auto& item : split_list(raw(key))) {
      const long long v = to_integer(key, item);
      if (v < 1) fail(key, "values must be >= 1");
      out.push_back(static_cast<Index>(v));
    }
    if (out.empty()) fail(key, "empty list");
    return out;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = trim(raw(key));
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }

  std::string word(const std::string& key, const std::string& fallback,
                   std::initializer_list<const char*> allowed) const {
    if (!has(key)) return fallback;
    const std::string v = trim(raw(key));
    for (const char* a : allowed) {
      if (v == a) return v;
    }
    std::string msg = "expected one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    fail(key, msg + ", got '" + v + "'");
  }

  MatrixXd matrix(const std::string& key, Index p, double fallback) const {
    if (!has(key)) return fallback * MatrixXd::Identity(p, p);
    const std::vector<double> v = reals(key);
    const auto size = static_cast<Index>(v.size());
    MatrixXd m;
    if (size == 1) {
      m = v[0] * MatrixXd::Identity(p, p);
    } else if (size == p) {
      m = MatrixXd::Zero(p, p);
      for (Index i = 0; i < p; ++i) m(i, i) = v[static_cast<std::size_t>(i)];
    } else if (size == p * p) {
      m.resize(p, p);
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) m(i, j) = v[static_cast<std::size_t>(i * p + j)];
      }
    } else {
      fail(key, "expected 1, p or p*p entries");
    }
    if (!is_spd(m)) fail(key, "matrix must be symmetric positive definite");
    return m;
  }

  VectorXd vector(const std::string& key, Index p, double fallback) const {
    if (!has(key)) return VectorXd::Constant(p, fallback);
    const std::vector<double> v = reals(key);
    if (v.size() == 1) return VectorXd::Constant(p, v[0]);
    if (static_cast<Index>(v.size()) != p) fail(key, "expected 1 or p entries");
    VectorXd out(p);
    for (Index i = 0; i < p; ++i) out[i] = v[static_cast<std::size_t>(i)];
    if (!out.allFinite()) fail(key, "entries must be finite");
    return out;
  }

 private:
  const ConfigEntries& entries_;
};

void append_matrix(std::ostringstream& os, const char* key, const MatrixXd& m) {
  os << key << '=';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (i || j ? "," : "") << num(m(i, j));
  }
  os << '\n';
}

template <class T>
void append_list(std::ostringstream& os, const char* key, const T& v) {
  os << key << '=';
  for (std::size_t i = 0; i < static_cast<std::size_t>(v.size()); ++i) {
    os << (i ? "," : "") << num(static_cast<double>(v[static_cast<Index>(i)]));
  }
  os << '\n';
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "model", "p", "sigma_y", "sigma_x", "prior_mean", "prior_cov", "theta_true", "data_mode",
      "kernel", "start", "mh_scale", "iid_scale", "n_grid", "n", "m_grid", "chain_length", "m",
      "replicates", "chains_per_replicate", "estimator", "draws_per_step", "is_mode", "localized",
      "reference", "truncation", "ref_size", "seed", "output", "demo"};
  return keys;
}

ConfigEntries parse_config_text(std::istream& is) {
  ConfigEntries out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "", "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "", "missing key");
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(lineno, key, "unknown key");
    }
    if (out.values.count(key) != 0) throw ConfigError(lineno, key, "duplicate key");
    out.values[key] = {value, lineno};
  }
  return out;
}

ConfigEntries parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
  return parse_config_text(in);
}

void apply_override(ConfigEntries& entries, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(0, assignment, "override must be key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError(0, key, "unknown key");
  }
  entries.values[key] = {trim(assignment.substr(eq + 1)), 0};
}

ExperimentConfig build_config(const ConfigEntries& entries) {
  const Reader r(entries);
  ExperimentConfig c;
  c.model = r.word("model", "normal_augmentation", {"normal_augmentation"});
  const long long p = r.integer("p", 1);
  if (p < 1 || p > 64) r.fail("p", "must be between 1 and 64");
  c.p = static_cast<Index>(p);
  c.sigma_y = r.matrix("sigma_y", c.p, 1.0);
  c.sigma_x = r.matrix("sigma_x", c.p, 1.0);
  c.prior_mean = r.vector("prior_mean", c.p, 0.0);
  c.prior_cov = r.matrix("prior_cov", c.p, 100.0);
  c.theta_true = r.vector("theta_true", c.p, 0.5);
  c.data_mode = r.word("data_mode", "fixed", {"fixed", "prior_predictive"}) == "fixed"
                    ? DataMode::fixed
                    : DataMode::prior_predictive;

  const std::string kernel = r.word("kernel", "gibbs", {"gibbs", "approx_gibbs", "mh", "iid"});
  c.kernel = kernel == "gibbs"          ? KernelKind::gibbs
             : kernel == "approx_gibbs" ? KernelKind::approx_gibbs
             : kernel == "mh"           ? KernelKind::mh
                                        : KernelKind::iid;
  c.start = r.word("start", "stationary", {"stationary", "perturbed"}) == "stationary"
                ? StartMode::stationary
                : StartMode::perturbed;
  c.mh_scale = r.real("mh_scale", 1.0);
  if (!(c.mh_scale > 0.0) || !std::isfinite(c.mh_scale)) r.fail("mh_scale", "must be positive");
  c.iid_scale = r.real("iid_scale", 1.0);
  if (!(c.iid_scale > 0.0) || !std::isfinite(c.iid_scale)) r.fail("iid_scale", "must be positive");

  if (r.has("n_grid") && r.has("n")) r.fail("n", "give either n or n_grid");
  if (r.has("n_grid")) c.n_grid = r.positive_integers("n_grid");
  if (r.has("n")) c.n_grid = r.positive_integers("n");
  const int m_keys = r.has("m_grid") + r.has("chain_length") + r.has("m");
  if (m_keys > 1) r.fail(r.has("m") ? "m" : "chain_length", "give only one of m_grid, chain_length, m");
  for (const char* key : {"m_grid", "chain_length", "m"}) {
    if (r.has(key)) c.m_grid = r.positive_integers(key);
  }

  const long long reps = r.integer("replicates", 10);
  if (reps < 2) r.fail("replicates", "must be >= 2 (a standard error needs two replicates)");
  c.replicates = static_cast<int>(reps);
  const long long chains = r.integer("chains_per_replicate", 1);
  if (chains < 1) r.fail("chains_per_replicate", "must be >= 1");
  c.chains_per_replicate = static_cast<int>(chains);

  try {
    c.estimator.kind = parse_estimator(
        r.word("estimator", "empirical", {"empirical", "burn_in", "thinning", "importance", "rao_blackwell"}));
    c.estimator.is_mode = parse_is_mode(r.word("is_mode", "self_normalized", {"raw", "self_normalized"}));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "estimator", e.what());
  }
  const long long dps = r.integer("draws_per_step", 1);
  if (dps < 1) r.fail("draws_per_step", "must be >= 1");
  c.estimator.draws_per_step = static_cast<int>(dps);
  if (c.estimator.kind == EstimatorKind::thinning) {
    for (Index m : c.m_grid) {
      if (m < 2) r.fail(r.has("m_grid") ? "m_grid" : "chain_length", "thinning needs m >= 2");
    }
  }
  if (c.estimator.kind == EstimatorKind::importance && c.kernel != KernelKind::iid) {
    r.fail("estimator", "importance weighting needs kernel = iid");
  }
  if (c.estimator.kind == EstimatorKind::rao_blackwell && c.kernel != KernelKind::gibbs) {
    r.fail("estimator", "rao_blackwell needs kernel = gibbs");
  }

  c.localized = r.boolean("localized", false);
  c.reference = r.word("reference", "posterior", {"posterior", "bvm"}) == "posterior"
                    ? ReferenceKind::posterior
                    : ReferenceKind::bvm;
  c.truncation = r.real("truncation", 1.0);
  if (!(c.truncation > 0.0)) r.fail("truncation", "must be positive or inf");
  const long long ref = r.integer("ref_size", 1000);
  if (ref < 1000) r.fail("ref_size", "must be >= 1000");
  c.ref_size = static_cast<Index>(ref);
  const long long seed = r.integer("seed", 1);
  if (seed < 0) r.fail("seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.output = r.has("output") ? r.raw("output") : std::string();
  c.demo = r.has("demo") ? r.word("demo", "", {"high_dim_is", "shrinking_mh"}) : std::string();
  return c;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "chains_per_replicate=" << chains_per_replicate << '\n';
  os << "data_mode=" << to_string(data_mode) << '\n';
  os << "draws_per_step=" << estimator.draws_per_step << '\n';
  os << "estimator=" << to_string(estimator.kind) << '\n';
  os << "iid_scale=" << num(iid_scale) << '\n';
  os << "is_mode=" << to_string(estimator.is_mode) << '\n';
  os << "kernel=" << to_string(kernel) << '\n';
  os << "localized=" << (localized ? "true" : "false") << '\n';
  append_list(os, "m_grid", m_grid);
  os << "mh_scale=" << num(mh_scale) << '\n';
  os << "model=" << model << '\n';
  append_list(os, "n_grid", n_grid);
  os << "p=" << p << '\n';
  append_matrix(os, "prior_cov", prior_cov);
  append_list(os, "prior_mean", prior_mean);
  os << "ref_size=" << ref_size << '\n';
  os << "reference=" << to_string(reference) << '\n';
  os << "replicates=" << replicates << '\n';
  os << "seed=" << seed << '\n';
  append_matrix(os, "sigma_x", sigma_x);
  append_matrix(os, "sigma_y", sigma_y);
  os << "start=" << to_string(start) << '\n';
  append_list(os, "theta_true", theta_true);
  os << "truncation=" << num(truncation) << '\n';
  return os.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lcmc
