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

#ifndef MASUB_MAXIMIZE_H_
#define MASUB_MAXIMIZE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "masub/lifting.h"
#include "masub/matroids.h"
#include "masub/oracles.h"
#include "masub/rational.h"

namespace masub {

struct GreedyPick {
  int element = -1;
  Rational marginal;
};

struct GreedyTrace {
  std::vector<GreedyPick> picks;
  uint64_t solution = 0;
  Rational value;
};

// Constraint handle for greedy: a single matroid or a p-fold intersection.
struct IndependenceConstraint {
  std::vector<MatroidPtr> matroids;  // intersection of all

  bool Independent(uint64_t bits) const;
  int p() const { return static_cast<int>(matroids.size()); }
};

// Classical greedy: repeatedly adds the feasible element of largest marginal
// (ties: smallest index); stops when the best feasible marginal is negative,
// even for monotone-flagged oracles. Guarantees value >= OPT/(p+1) over a
// p-matroid intersection for monotone nonnegative f.
GreedyTrace GreedyMax(const SubmodularOracle& f,
                      const IndependenceConstraint& c);

// Deterministic double greedy (value >= OPT/3 for nonnegative f) and the
// seeded randomized variant (expected >= OPT/2).
uint64_t DoubleGreedy(const SubmodularOracle& f);
uint64_t DoubleGreedyRandomized(const SubmodularOracle& f, uint64_t seed = 0);

struct MultiAgentSolution {
  SetTuple tuple;
  std::vector<Rational> per_agent_cost;  // empty when not decomposable
  Rational total;
  bool feasible = false;
  GreedyTrace trace;  // populated by greedy-based solvers
};

// Maximizes a monotone nonnegative multivariate g over
// S_1 + ... + S_k in F, S_i in F_i by lifting the constraint and oracle and
// running greedy on E; for bases families the greedy solution is completed
// to a base. Feasibility is re-verified directly on the tuple.
MultiAgentSolution MaMaximize(MvOraclePtr g, const LiftInput& f,
                              const std::vector<MatroidPtr>& fs);

// Exact min over all removals A_i subset S_i with sum |A_i| <= tau.
// Refuses when the removal enumeration exceeds the cap.
Rational RobustValue(const MultivariateOracle& g, const SetTuple& t, int tau,
                     long long enumeration_cap = 1000000);

// Single-agent robust solver plug: given the lifted oracle, the lifted
// feasibility test, and tau, returns a lifted solution mask.
using SaRobustSolver = std::function<uint64_t(
    const SubmodularOracle&, const std::function<bool(uint64_t)>&, int)>;

// Default plug: exhaustive search over lifted feasible sets; refuses when
// 2^(k*n) exceeds the cap.
SaRobustSolver ExhaustiveRobustSolver(int cap_log2 = 20);

// Lifts to max_{S in L} min_{|A| <= tau, A subset S} f(S - A), delegates to
// the plug, and reports the robust value of the result.
MultiAgentSolution RobustMaximize(MvOraclePtr g, const LiftInput& f,
                                  const std::vector<MatroidPtr>& fs, int tau,
                                  const SaRobustSolver& solver);

}  // namespace masub

#endif  // MASUB_MAXIMIZE_H_
