// Copyright 2026 The OTR Labeling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "otr/error.hpp"
#include "otr/ot_solver.hpp"

namespace otr {
namespace detail {
void CheckTransportInputs(const CostMatrix& cost, std::span<const double> a,
                          std::span<const double> b);
}  // namespace detail

namespace {

// Residual capacities below this are treated as saturated.
constexpr double kFlowEpsilon = 1e-15;

struct Arc {
  int to;
  int reverse;  // index of the paired arc in graph[to]
  double capacity;
  double cost;
};

class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

  // Returns the index of the forward arc in graph[from].
  std::size_t AddArc(int from, int to, double capacity, double cost) {
    auto& out = graph_[static_cast<std::size_t>(from)];
    auto& in = graph_[static_cast<std::size_t>(to)];
    out.push_back({to, static_cast<int>(in.size()), capacity, cost});
    in.push_back({from, static_cast<int>(out.size()) - 1, 0.0, -cost});
    return out.size() - 1;
  }

  const Arc& arc(int from, std::size_t index) const {
    return graph_[static_cast<std::size_t>(from)][index];
  }

  // Successive shortest augmenting paths (Bellman-Ford on the residual
  // graph). Sends up to `target` units from source to sink.
  double MinCostFlow(int source, int sink, double target) {
    const std::size_t nodes = graph_.size();
    double sent = 0.0;
    std::vector<double> dist(nodes);
    std::vector<int> prev_node(nodes);
    std::vector<int> prev_arc(nodes);
    while (target - sent > kFlowEpsilon) {
      std::fill(dist.begin(), dist.end(),
                std::numeric_limits<double>::infinity());
      std::fill(prev_node.begin(), prev_node.end(), -1);
      dist[static_cast<std::size_t>(source)] = 0.0;
      for (std::size_t pass = 0; pass + 1 < nodes; ++pass) {
        bool relaxed = false;
        for (std::size_t u = 0; u < nodes; ++u) {
          if (dist[u] == std::numeric_limits<double>::infinity()) continue;
          for (std::size_t k = 0; k < graph_[u].size(); ++k) {
            const Arc& e = graph_[u][k];
            if (e.capacity <= kFlowEpsilon) continue;
            const double cand = dist[u] + e.cost;
            // Strict improvement beyond rounding noise; guards against
            // spurious zero-cost cycles from floating-point costs.
            if (cand < dist[static_cast<std::size_t>(e.to)] - 1e-14) {
              dist[static_cast<std::size_t>(e.to)] = cand;
              prev_node[static_cast<std::size_t>(e.to)] = static_cast<int>(u);
              prev_arc[static_cast<std::size_t>(e.to)] = static_cast<int>(k);
              relaxed = true;
            }
          }
        }
        if (!relaxed) break;
      }
      if (prev_node[static_cast<std::size_t>(sink)] < 0) break;

      double push = target - sent;
      for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
        const int u = prev_node[static_cast<std::size_t>(v)];
        push = std::min(push, graph_[static_cast<std::size_t>(u)]
                                    [static_cast<std::size_t>(
                                        prev_arc[static_cast<std::size_t>(v)])]
                                        .capacity);
      }
      for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
        const int u = prev_node[static_cast<std::size_t>(v)];
        Arc& e = graph_[static_cast<std::size_t>(u)][static_cast<std::size_t>(
            prev_arc[static_cast<std::size_t>(v)])];
        e.capacity -= push;
        graph_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.reverse)]
            .capacity += push;
      }
      sent += push;
    }
    return sent;
  }

 private:
  std::vector<std::vector<Arc>> graph_;
};

}  // namespace

Coupling LpOracle(const CostMatrix& cost, std::span<const double> a,
                  std::span<const double> b) {
  if (a.size() + b.size() > kLpOracleMaxPoints) {
    throw Error(ErrorKind::kTooLarge,
                "exact oracle limited to " + std::to_string(kLpOracleMaxPoints) +
                    " points, got " + std::to_string(a.size() + b.size()));
  }
  detail::CheckTransportInputs(cost, a, b);

  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int source = n + m;
  const int sink = n + m + 1;
  FlowNetwork net(n + m + 2);
  double supply = 0.0;
  double demand = 0.0;
  for (int i = 0; i < n; ++i) {
    net.AddArc(source, i, a[static_cast<std::size_t>(i)], 0.0);
    supply += a[static_cast<std::size_t>(i)];
  }
  std::vector<std::vector<std::size_t>> arc_index(
      static_cast<std::size_t>(n), std::vector<std::size_t>(static_cast<std::size_t>(m)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      arc_index[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          net.AddArc(i, n + j, std::numeric_limits<double>::infinity(),
                     cost(i, j));
    }
  }
  for (int j = 0; j < m; ++j) {
    net.AddArc(n + j, sink, b[static_cast<std::size_t>(j)], 0.0);
    demand += b[static_cast<std::size_t>(j)];
  }
  net.MinCostFlow(source, sink, std::min(supply, demand));

  Coupling out;
  out.plan = Matrix::Zero(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const Arc& e =
          net.arc(i, arc_index[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      // Flow on an arc equals the capacity gained by its reverse arc.
      const double flow = net.arc(e.to, static_cast<std::size_t>(e.reverse)).capacity;
      out.plan(i, j) = flow;
    }
  }
  out.row_marginal.assign(a.begin(), a.end());
  out.col_marginal.assign(b.begin(), b.end());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) row += cost(i, j) * out.plan(i, j);
    total += row;
  }
  out.transport_cost = total;
  out.converged = true;
  out.iterations = 1;
  return out;
}

}  // namespace otr
