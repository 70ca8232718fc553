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

#ifndef MASUB_MINIMIZE_H_
#define MASUB_MINIMIZE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "masub/blockers.h"
#include "masub/maximize.h"
#include "masub/oracles.h"
#include "masub/rational.h"
#include "masub/sfm.h"

namespace masub {

// Agent-indexed LP column.
struct LpColumn {
  uint64_t set = 0;
  int agent = 0;  // always 0 for single-agent solutions
  Rational weight;
};

// Solution of the covering relaxation min sum x(S)f(S) (or the agent-indexed
// variant): the fractional point z is exactly feasible after repair, the
// columns dominate z, and objective = sum of column weights times costs.
struct CoveringLpSolution {
  FractionalPoint z;                      // over V (sum over agents)
  std::vector<FractionalPoint> z_agents;  // per agent (k entries)
  std::vector<LpColumn> columns;
  Rational objective;
  int iterations = 0;
  Rational final_violation;  // max(0, 1 - min_B z(B)) before repair
  bool converged = true;
};

struct SubgradientOptions {
  int iteration_factor = 50;  // cap = factor * n^2
  double tolerance = 1e-9;
};

// Projected subgradient minimization of f^L over [0,1]^V with separation-
// driven feasibility penalties, followed by exact feasibility repair
// (scaling by the worst blocker deficit, clamped at 1) and an exact
// level-set decomposition. f must be monotone, nonnegative, normalized.
CoveringLpSolution SolveSaLp(OraclePtr f,
                             std::shared_ptr<const BlockingFamily> p,
                             const SubgradientOptions& options = {});

// Exact optimum of the covering LP for an explicit blocker clutter, by an
// exact rational simplex over the 2^n column variables. Caps: n <= 6 for
// modular f... n <= 5 in general. Test oracle for the subgradient solver.
Rational LpExactOracle(const SubmodularOracle& f, const Clutter& blocker,
                       bool modular_hint = false);

// Multi-agent LP: minimizes sum_i f_i^L(z_i) with sum_i z_i in P*(F);
// per-agent level-set decompositions provide the columns x(S, i).
CoveringLpSolution SolveMaLp(std::vector<OraclePtr> fs,
                             std::shared_ptr<const BlockingFamily> p,
                             const SubgradientOptions& options = {});

// Q = {v : z(v) >= 1/beta}; Q is feasible and f(Q) <= beta * objective.
uint64_t BoundedBlockerRound(const CoveringLpSolution& sol,
                             const BlockingFamily& p);

// Threshold at 1/beta, then greedy weighted set cover of Q from the support
// pairs (S, i) with costs f_i(S); merge per agent and remove duplicated
// elements from all but the lowest-index owning agent. Total cost is
// certified <= beta * ln(n) * objective.
MultiAgentSolution MaBoundedBlockerRound(const CoveringLpSolution& sol,
                                         const BlockingFamily& p,
                                         const std::vector<OraclePtr>& fs);

// Pluggable alpha-rounding for a single-agent problem: receives the induced
// oracle g, the family, and a feasible fractional solution for g's LP.
using SaRounder = std::function<uint64_t(
    OraclePtr, const BlockingFamily&, const CoveringLpSolution&)>;

SaRounder BoundedBlockerRounder();

struct FractureStage {
  std::string name;
  Rational cost;  // fractional (or final integral) cost after the stage
};

struct FractureTrace {
  std::vector<FractureStage> stages;
  Rational lp_objective;
  Rational factor_product;  // final cost / LP objective
  int nonempty_bins = 0;
};

struct FractureResult {
  MultiAgentSolution solution;
  FractureTrace trace;
};

// The fracture/expand/return rounding for multi-agent minimization over an
// upward-closed family: (1) MA LP; (2) drop elements with z(v) <= 1/(2n) and
// double the remaining columns; (3) round z up to powers of two within bins
// Z_j = {v : z(v) in (2^-(j+1), 2^-j]}, truncating sets as needed;
// (4) fracture columns by bin; (5) per bin scale by r_j = 2^j and greedily
// cover Z_j with truncated disjoint pieces U_sj; (6) return weights 1/r_j;
// (7) round the induced g(S) = sum of c(U_sj) over hit pieces with the
// single-agent rounder, pick off pieces, merge per agent.
FractureResult FractureExpandReturn(const std::vector<OraclePtr>& fs,
                                    std::shared_ptr<const BlockingFamily> p,
                                    const SaRounder& rounder,
                                    const SubgradientOptions& options = {});

// Single-agent solver plug for the k-alpha reduction: minimizes the induced
// f' over the family and returns the chosen set.
using SaMinSolver =
    std::function<uint64_t(OraclePtr, const BlockingFamily&)>;

// Exact desk-scale solver: brute-force minimum of f over the upward closure.
SaMinSolver ExactSaMinSolver(int cap = 20);

// The O(k alpha) multivariate reduction: solves the lifted SA relaxation on
// E, picks per element the incident edge of largest chain mass (ties: lowest
// agent), induces f'(S) = f(pi(S)) on V, solves (f', F) with the plug, and
// maps the answer back through pi.
MultiAgentSolution MvReduceKAlpha(MvOraclePtr g,
                                  std::shared_ptr<const BlockingFamily> p,
                                  const SaMinSolver& solver,
                                  const SubgradientOptions& options = {});

// Greedy cover for constrained MSCA: each round every agent solves the
// min-ratio problem min f_i(S)/|S cap U| over S within its region via
// binary search on theta with SFM subproblems; the densest piece is assigned
// and removed. Cost <= ln(max_i |V_i|) * OPT.
MultiAgentSolution MscaGreedy(const std::vector<OraclePtr>& fs,
                              const std::vector<uint64_t>& regions);

// Minimum-weight saturating (b_1..b_k)-matching with weights w(i,v) =
// f_i({v}) on the agent-element bipartite graph, by exact min-cost flow.
// Exact optimum when k = n and all b_i = 1, even for non-monotone f_i.
MultiAgentSolution MscaBMatching(const std::vector<OraclePtr>& fs,
                                 const std::vector<uint64_t>& regions,
                                 const std::vector<int>& caps);

// Re-export of the ring-constrained multivariate minimization, completing
// the minimization surface.
inline MvSfmResult SfmRingConstrainedMin(const MultivariateOracle& g,
                                         const RingFamily& lifted_ring,
                                         int cap_log2 = 20) {
  return SfmMvRing(g, lifted_ring, cap_log2);
}

}  // namespace masub

#endif  // MASUB_MINIMIZE_H_
