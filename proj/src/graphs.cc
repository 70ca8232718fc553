// Copyright 2023 The Authors.
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

#include "masub/graphs.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "masub/errors.h"
#include "masub/ground_set.h"

namespace masub {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int Find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // Returns false if already joined (cycle).
  bool Join(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

bool IsForest(const Graph& g, uint64_t edge_mask) {
  UnionFind uf(g.num_nodes);
  bool ok = true;
  ForEachBit(edge_mask, [&](int e) {
    if (!ok) return;
    auto [u, v] = g.edges[e];
    if (u == v || !uf.Join(u, v)) ok = false;  // self-loop or cycle
  });
  return ok;
}

bool IsMatching(const Graph& g, uint64_t edge_mask) {
  std::vector<char> used(g.num_nodes, 0);
  bool ok = true;
  ForEachBit(edge_mask, [&](int e) {
    if (!ok) return;
    auto [u, v] = g.edges[e];
    if (u == v || used[u] || used[v]) {
      ok = false;
      return;
    }
    used[u] = used[v] = 1;
  });
  return ok;
}

bool IsSpanningTree(const Graph& g, uint64_t edge_mask) {
  return IsForest(g, edge_mask) &&
         std::popcount(edge_mask) == g.num_nodes - 1;
}

bool IsPerfectMatching(const Graph& g, uint64_t edge_mask) {
  return IsMatching(g, edge_mask) &&
         2 * std::popcount(edge_mask) == g.num_nodes;
}

bool ContainsStPath(const Graph& g, uint64_t edge_mask, int s, int t) {
  UnionFind uf(g.num_nodes);
  ForEachBit(edge_mask, [&](int e) {
    auto [u, v] = g.edges[e];
    uf.Join(u, v);
  });
  return uf.Find(s) == uf.Find(t);
}

bool IsExactStPath(const Graph& g, uint64_t edge_mask, int s, int t) {
  if (s == t) return edge_mask == 0;
  if (!ContainsStPath(g, edge_mask, s, t)) return false;
  // A simple path: degrees are 1 at s and t, 2 elsewhere on the path, 0 off
  // it, and the edge count matches the number of touched nodes minus one.
  std::vector<int> degree(g.num_nodes, 0);
  int edges = 0;
  bool simple = true;
  ForEachBit(edge_mask, [&](int e) {
    auto [u, v] = g.edges[e];
    if (u == v) simple = false;
    ++degree[u];
    ++degree[v];
    ++edges;
  });
  if (!simple) return false;
  int touched = 0;
  for (int v = 0; v < g.num_nodes; ++v) {
    if (degree[v] == 0) continue;
    ++touched;
    int expected = (v == s || v == t) ? 1 : 2;
    if (degree[v] != expected) return false;
  }
  return edges == touched - 1;
}

namespace {

struct FlowEdge {
  int to;
  BigInt cap;
  int rev;
  int original_edge;  // index into g.edges, -1 for reverse arcs
};

class Dinic {
 public:
  explicit Dinic(int n) : adj_(n), level_(n), it_(n) {}

  void AddEdge(int u, int v, const BigInt& cap, int original_edge) {
    adj_[u].push_back({v, cap, static_cast<int>(adj_[v].size()), original_edge});
    adj_[v].push_back({u, 0, static_cast<int>(adj_[u].size()) - 1, -1});
  }

  BigInt Run(int s, int t) {
    BigInt flow = 0;
    while (Bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        BigInt pushed = Dfs(s, t, BigInt(-1));
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  std::vector<char> SourceSide(int s) const {
    std::vector<char> side(adj_.size(), 0);
    std::queue<int> q;
    q.push(s);
    side[s] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const auto& e : adj_[u]) {
        if (e.cap > 0 && !side[e.to]) {
          side[e.to] = 1;
          q.push(e.to);
        }
      }
    }
    return side;
  }

  const std::vector<std::vector<FlowEdge>>& adj() const { return adj_; }

 private:
  bool Bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const auto& e : adj_[u]) {
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  BigInt Dfs(int u, int t, BigInt limit) {
    if (u == t) return limit;
    for (int& i = it_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      FlowEdge& e = adj_[u][i];
      if (e.cap <= 0 || level_[e.to] != level_[u] + 1) continue;
      BigInt pass = (limit < 0 || e.cap < limit) ? e.cap : limit;
      BigInt pushed = Dfs(e.to, t, pass);
      if (pushed > 0) {
        e.cap -= pushed;
        adj_[e.to][e.rev].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<FlowEdge>> adj_;
  std::vector<int> level_;
  std::vector<int> it_;
};

}  // namespace

MaxFlowResult MaxFlow(const Graph& g, const std::vector<BigInt>& capacities,
                      int s, int t) {
  if (capacities.size() != g.edges.size()) {
    throw PreconditionError("max flow needs one capacity per edge");
  }
  Dinic dinic(g.num_nodes);
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [u, v] = g.edges[e];
    // Undirected edge: one arc each way, tagged with the edge id.
    dinic.AddEdge(u, v, capacities[e], e);
    dinic.AddEdge(v, u, capacities[e], e);
  }
  MaxFlowResult result;
  result.value = dinic.Run(s, t);
  result.source_side = dinic.SourceSide(s);
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [u, v] = g.edges[e];
    if (result.source_side[u] != result.source_side[v]) {
      result.cut_edges |= uint64_t{1} << e;
    }
  }
  return result;
}

McfResult MinCostFlow(int num_nodes, const std::vector<McfArc>& arcs, int s,
                      int t, long long target_flow) {
  struct Arc {
    int to;
    long long cap;
    Rational cost;
    int rev;
  };
  std::vector<std::vector<Arc>> adj(num_nodes);
  std::vector<std::pair<int, int>> arc_pos;  // (node, index) per input arc
  for (const auto& a : arcs) {
    arc_pos.emplace_back(a.from, static_cast<int>(adj[a.from].size()));
    adj[a.from].push_back(
        {a.to, a.capacity, a.cost, static_cast<int>(adj[a.to].size())});
    adj[a.to].push_back(
        {a.from, 0, -a.cost, static_cast<int>(adj[a.from].size()) - 1});
  }

  McfResult result;
  result.cost = 0;
  while (result.flow < target_flow) {
    // Bellman-Ford on the residual graph; costs may be negative but there
    // are no negative cycles along shortest-path augmentations.
    std::vector<std::optional<Rational>> dist(num_nodes);
    std::vector<std::pair<int, int>> pred(num_nodes, {-1, -1});
    dist[s] = Rational(0);
    for (int round = 0; round < num_nodes; ++round) {
      bool changed = false;
      for (int u = 0; u < num_nodes; ++u) {
        if (!dist[u]) continue;
        for (size_t i = 0; i < adj[u].size(); ++i) {
          const Arc& e = adj[u][i];
          if (e.cap <= 0) continue;
          Rational cand = *dist[u] + e.cost;
          if (!dist[e.to] || cand < *dist[e.to]) {
            dist[e.to] = cand;
            pred[e.to] = {u, static_cast<int>(i)};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!dist[t]) break;  // no augmenting path
    long long push = target_flow - result.flow;
    for (int v = t; v != s;) {
      auto [u, i] = pred[v];
      push = std::min(push, adj[u][i].cap);
      v = u;
    }
    for (int v = t; v != s;) {
      auto [u, i] = pred[v];
      adj[u][i].cap -= push;
      adj[adj[u][i].to][adj[u][i].rev].cap += push;
      v = u;
    }
    result.flow += push;
    result.cost += *dist[t] * push;
  }

  result.arc_flow.resize(arcs.size());
  for (size_t a = 0; a < arcs.size(); ++a) {
    auto [node, idx] = arc_pos[a];
    result.arc_flow[a] = arcs[a].capacity - adj[node][idx].cap;
  }
  return result;
}

}  // namespace masub
