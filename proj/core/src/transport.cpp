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

#include "lcmc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lcmc::transport {
namespace {

// Convex piecewise-linear function m0 + sum_L w (l - x)^+ + sum_R w (x - r)^+
// with max(L) <= min(R), so m0 is its minimum.
class SlopeFunction {
 public:
  void add_right(double a, double w) {
    if (w <= 0.0) return;
    if (left_.empty() || a >= left_.rbegin()->first) {
      right_[a] += w;
      right_mass_ += w;
      return;
    }
    left_[a] += w;
    left_mass_ += w;
    double remaining = w;
    double pivot = a;
    double moved_moment = 0.0;
    std::vector<std::pair<double, double>> moved;
    while (remaining > 0.0 && !left_.empty()) {
      auto top = std::prev(left_.end());
      const double take = std::min(top->second, remaining);
      moved.emplace_back(top->first, take);
      pivot = top->first;
      right_[top->first] += take;
      right_mass_ += take;
      left_mass_ -= take;
      remaining -= take;
      if (take >= top->second) {
        left_.erase(top);
      } else {
        top->second -= take;
      }
    }
    for (const auto& [pos, take] : moved) moved_moment += take * (pos - pivot);
    min_value_ += moved_moment + w * (pivot - a);
  }

  void add_left(double a, double w) {
    if (w <= 0.0) return;
    if (right_.empty() || a <= right_.begin()->first) {
      left_[a] += w;
      left_mass_ += w;
      return;
    }
    right_[a] += w;
    right_mass_ += w;
    double remaining = w;
    double pivot = a;
    double moved_moment = 0.0;
    std::vector<std::pair<double, double>> moved;
    while (remaining > 0.0 && !right_.empty()) {
      auto bottom = right_.begin();
      const double take = std::min(bottom->second, remaining);
      moved.emplace_back(bottom->first, take);
      pivot = bottom->first;
      left_[bottom->first] += take;
      left_mass_ += take;
      right_mass_ -= take;
      remaining -= take;
      if (take >= bottom->second) {
        right_.erase(bottom);
      } else {
        bottom->second -= take;
      }
    }
    for (const auto& [pos, take] : moved) moved_moment += take * (pivot - pos);
    min_value_ += moved_moment + w * (a - pivot);
  }

  void add_abs(double a, double w) {
    add_right(a, w);
    add_left(a, w);
  }

  // Infimal convolution with c |x|: slopes clipped to [-c, c].
  void clamp_slopes(double c) {
    while (left_mass_ > c && !left_.empty()) {
      auto low = left_.begin();
      const double excess = left_mass_ - c;
      if (low->second <= excess) {
        left_mass_ -= low->second;
        left_.erase(low);
      } else {
        low->second -= excess;
        left_mass_ = c;
      }
    }
    while (right_mass_ > c && !right_.empty()) {
      auto high = std::prev(right_.end());
      const double excess = right_mass_ - c;
      if (high->second <= excess) {
        right_mass_ -= high->second;
        right_.erase(high);
      } else {
        high->second -= excess;
        right_mass_ = c;
      }
    }
  }

  double value(double x) const {
    double v = min_value_;
    for (auto it = left_.upper_bound(x); it != left_.end(); ++it) v += it->second * (it->first - x);
    for (auto it = right_.begin(); it != right_.end() && it->first < x; ++it) {
      v += it->second * (x - it->first);
    }
    return v;
  }

 private:
  std::map<double, double> left_;
  std::map<double, double> right_;
  double left_mass_ = 0.0;
  double right_mass_ = 0.0;
  double min_value_ = 0.0;
};

}  // namespace

double line_w1(std::span<const double> xa, std::span<const double> wa,
               std::span<const double> xb, std::span<const double> wb, double truncation) {
  if (xa.size() != wa.size() || xb.size() != wb.size()) {
    throw std::invalid_argument("line_w1: points and weights differ in length");
  }
  if (!(truncation > 0.0)) throw std::invalid_argument("line_w1: truncation must be positive");

  std::vector<std::pair<double, double>> net;
  net.reserve(xa.size() + xb.size());
  for (std::size_t i = 0; i < xa.size(); ++i) net.emplace_back(xa[i], wa[i]);
  for (std::size_t i = 0; i < xb.size(); ++i) net.emplace_back(xb[i], -wb[i]);
  std::sort(net.begin(), net.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  std::vector<double> pos;
  std::vector<double> supply;
  for (const auto& [x, d] : net) {
    if (!pos.empty() && pos.back() == x) {
      supply.back() += d;
    } else {
      pos.push_back(x);
      supply.push_back(d);
    }
  }
  const std::size_t k = pos.size();
  if (k <= 1) return 0.0;

  if (std::isinf(truncation)) {
    double cum = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      cum += supply[i];
      total += (pos[i + 1] - pos[i]) * std::abs(cum);
    }
    return total;
  }

  // Stage i carries the cumulative hub outflow H_i of nodes 0..i; the line
  // edge (i, i+1) then carries S_i - H_i.
  const double hub = truncation / 2.0;
  SlopeFunction f;
  f.add_abs(0.0, hub);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    cum += supply[i];
    if (i > 0) f.clamp_slopes(hub);
    f.add_abs(cum, pos[i + 1] - pos[i]);
  }
  f.clamp_slopes(hub);
  return std::max(0.0, f.value(0.0));
}

namespace {

struct TreeState {
  std::vector<int> order;        // BFS order of nodes, root first
  std::vector<int> parent;       // parent node, -1 at root
  std::vector<int> parent_arc;   // basis index of the arc to the parent
  std::vector<int> depth;
  std::vector<double> potential; // u for rows, v for columns
};

}  // namespace

double transportation_cost(const MatrixXd& cost, const VectorXd& supply, const VectorXd& demand) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (supply.size() != n || demand.size() != m || n == 0 || m == 0) {
    throw std::invalid_argument("transportation_cost: shape mismatch");
  }
  if (n == 1 || m == 1) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) c += cost(i, j) * (n == 1 ? demand[j] : supply[i]);
    }
    return c;
  }

  const int nodes = n + m;
  const double eps = 1e-10 / nodes;
  std::vector<double> sup(supply.data(), supply.data() + n);
  std::vector<double> dem(demand.data(), demand.data() + m);
  for (double& s : sup) s += eps;
  dem[m - 1] += n * eps;

  // North-west corner staircase: exactly n + m - 1 cells.
  std::vector<std::pair<int, int>> basis;
  basis.reserve(nodes - 1);
  {
    int i = 0;
    int j = 0;
    double rs = sup[0];
    double rd = dem[0];
    while (true) {
      basis.emplace_back(i, j);
      if (i == n - 1 && j == m - 1) break;
      if (i == n - 1 || (j < m - 1 && rd < rs)) {
        rs -= rd;
        rd = dem[++j];
      } else {
        rd -= rs;
        rs = sup[++i];
      }
    }
  }

  const double scale = cost.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const double tol = 1e-12 * scale;

  TreeState tree;
  tree.parent.assign(nodes, -1);
  tree.parent_arc.assign(nodes, -1);
  tree.depth.assign(nodes, 0);
  tree.potential.assign(nodes, 0.0);
  tree.order.reserve(nodes);
  std::vector<int> head(nodes + 1);
  std::vector<int> adj(2 * (nodes - 1));
  std::vector<double> flow(nodes - 1);

  auto build_tree = [&]() {
    std::fill(head.begin(), head.end(), 0);
    for (const auto& [i, j] : basis) {
      ++head[i + 1];
      ++head[n + j + 1];
    }
    for (int v = 0; v < nodes; ++v) head[v + 1] += head[v];
    std::vector<int> fill(head.begin(), head.end() - 1);
    for (int a = 0; a < static_cast<int>(basis.size()); ++a) {
      adj[fill[basis[a].first]++] = a;
      adj[fill[n + basis[a].second]++] = a;
    }
    tree.order.clear();
    std::fill(tree.parent.begin(), tree.parent.end(), -2);
    tree.parent[0] = -1;
    tree.parent_arc[0] = -1;
    tree.depth[0] = 0;
    tree.potential[0] = 0.0;
    tree.order.push_back(0);
    for (std::size_t q = 0; q < tree.order.size(); ++q) {
      const int v = tree.order[q];
      for (int e = head[v]; e < head[v + 1]; ++e) {
        const int a = adj[e];
        const int r = basis[a].first;
        const int c = n + basis[a].second;
        const int w = (v == r) ? c : r;
        if (tree.parent[w] != -2) continue;
        tree.parent[w] = v;
        tree.parent_arc[w] = a;
        tree.depth[w] = tree.depth[v] + 1;
        tree.potential[w] = cost(basis[a].first, basis[a].second) - tree.potential[v];
        tree.order.push_back(w);
      }
    }
    if (static_cast<int>(tree.order.size()) != nodes) {
      throw std::logic_error("transportation_cost: basis is not a spanning tree");
    }
  };

  // Arc flows on the current tree for the given node balances (rows supply,
  // columns demand), by peeling leaves.
  auto tree_flows = [&](const std::vector<double>& s, const std::vector<double>& d) {
    std::vector<double> residual(nodes);
    for (int i = 0; i < n; ++i) residual[i] = s[i];
    for (int j = 0; j < m; ++j) residual[n + j] = -d[j];
    for (int q = nodes - 1; q > 0; --q) {
      const int v = tree.order[q];
      const int a = tree.parent_arc[v];
      // Positive residual at a row leaves along its arc; at a column the arc
      // must bring in the missing demand.
      flow[a] = (v < n) ? residual[v] : -residual[v];
      residual[tree.parent[v]] += residual[v];
    }
  };

  const long long cells = static_cast<long long>(n) * m;
  const long long block = std::max<long long>(m, cells / 512);
  const long long max_iter = std::max<long long>(20000, 200LL * nodes);
  int cursor = 0;

  for (long long iter = 0;; ++iter) {
    if (iter > max_iter) throw std::runtime_error("transportation_cost: iteration limit reached");
    build_tree();
    tree_flows(sup, dem);

    int best_i = -1;
    int best_j = -1;
    double best = -tol;
    long long scanned = 0;
    for (int rows = 0; rows < n; ++rows) {
      const int i = cursor;
      cursor = (cursor + 1) % n;
      const double ui = tree.potential[i];
      for (int j = 0; j < m; ++j) {
        const double rc = cost(i, j) - ui - tree.potential[n + j];
        if (rc < best) {
          best = rc;
          best_i = i;
          best_j = j;
        }
      }
      scanned += m;
      if (best_i >= 0 && scanned >= block) break;
    }
    if (best_i < 0) break;

    // Cycle through the entering arc: walk both endpoints up to their common
    // ancestor, recording which tree arcs lose flow.
    int a = best_i;
    int b = n + best_j;
    int leave = -1;
    double leave_flow = 0.0;
    auto consider = [&](int arc) {
      if (leave < 0 || flow[arc] < leave_flow) {
        leave = arc;
        leave_flow = flow[arc];
      }
    };
    while (a != b) {
      if (tree.depth[a] >= tree.depth[b]) {
        if (a < n) consider(tree.parent_arc[a]);
        a = tree.parent[a];
      } else {
        if (b >= n) consider(tree.parent_arc[b]);
        b = tree.parent[b];
      }
    }
    if (leave < 0) throw std::logic_error("transportation_cost: no leaving arc");
    basis[leave] = {best_i, best_j};
  }

  tree_flows(std::vector<double>(supply.data(), supply.data() + n),
             std::vector<double>(demand.data(), demand.data() + m));
  double total = 0.0;
  for (int a = 0; a < nodes - 1; ++a) {
    total += cost(basis[a].first, basis[a].second) * std::max(0.0, flow[a]);
  }
  return total;
}

}  // namespace lcmc::transport
