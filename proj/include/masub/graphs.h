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

#ifndef MASUB_GRAPHS_H_
#define MASUB_GRAPHS_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "masub/rational.h"

namespace masub {

// Undirected multigraph; parallel edges and the edge-indexed ground set are
// both first-class since the lifting construction relies on them.
struct Graph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }
  void AddEdge(int u, int v) { edges.emplace_back(u, v); }
};

// Edge-subset predicates used by the invariant-family checks. Masks index
// into graph.edges.
bool IsForest(const Graph& g, uint64_t edge_mask);
bool IsMatching(const Graph& g, uint64_t edge_mask);
bool IsSpanningTree(const Graph& g, uint64_t edge_mask);
bool IsPerfectMatching(const Graph& g, uint64_t edge_mask);
// Exact path: the chosen edges form a simple s-t path using every edge.
bool IsExactStPath(const Graph& g, uint64_t edge_mask, int s, int t);
// Upward-closed version: the chosen edges contain an s-t path.
bool ContainsStPath(const Graph& g, uint64_t edge_mask, int s, int t);

// Exact max-flow (Dinic) with big-integer capacities. Returns the flow value
// and the source-side min cut.
struct MaxFlowResult {
  BigInt value;
  std::vector<char> source_side;  // per node
  uint64_t cut_edges = 0;         // edges from source side to sink side
};
MaxFlowResult MaxFlow(const Graph& g, const std::vector<BigInt>& capacities,
                      int s, int t);

// Exact min-cost flow via successive shortest paths (Bellman-Ford residual
// search; rational costs, integer capacities). Returns achieved flow value
// and total cost; per-arc flows in `flow`.
struct McfArc {
  int from = 0;
  int to = 0;
  long long capacity = 0;
  Rational cost;
};
struct McfResult {
  long long flow = 0;
  Rational cost;
  std::vector<long long> arc_flow;
};
McfResult MinCostFlow(int num_nodes, const std::vector<McfArc>& arcs, int s,
                      int t, long long target_flow);

}  // namespace masub

#endif  // MASUB_GRAPHS_H_
