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

#ifndef MASUB_SFM_H_
#define MASUB_SFM_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "masub/blockers.h"
#include "masub/ground_set.h"
#include "masub/lifting.h"
#include "masub/oracles.h"
#include "masub/rational.h"
#include "masub/ring_family.h"

namespace masub {

// Exact Lovasz extension value with its level-set chain: value =
// sum of weight_i * f(S_i) over a decreasing chain of sets, where the
// weights are the gaps between consecutive distinct values of z (ties share
// a level and are never reordered).
struct LovaszEvaluation {
  Rational value;
  std::vector<std::pair<uint64_t, Rational>> levels;  // (S_i, v_{i+1}-v_i)
};

// Requires 0 <= z <= 1 over the oracle's ground set.
LovaszEvaluation Lovasz(const SubmodularOracle& f,
                        const std::vector<Rational>& z);

// Column map supported on the chain: sum_S x(S) chi^S == z and
// sum_S x(S) f(S) == f^L(z). Empty and zero-weight levels are dropped.
std::vector<std::pair<uint64_t, Rational>> LevelSetDecomposition(
    const SubmodularOracle& f, const std::vector<Rational>& z);

struct SfmResult {
  uint64_t minimizer = 0;
  Rational value;
};

// Exact global minimizer by enumeration; ties broken by smallest bitmask.
// Refuses when n exceeds the cap (default 24).
SfmResult SfmBrute(const SubmodularOracle& f, int cap = 24);

// Fujishige-Wolfe minimum-norm point on the base polytope with the greedy
// linear-optimization subroutine. Runs in floating point internally
// (tolerance 1e-9); the candidate level sets of the final point are
// re-evaluated exactly and the best is returned, ties by smallest bitmask.
// Requires f submodular and normalized.
SfmResult SfmMinNorm(const SubmodularOracle& f);

// Exact minimum over ring members by enumeration of implication-closed sets
// within [L, U]; lexicographic bitmask order makes tie-breaks reproducible.
SfmResult SfmRing(const SubmodularOracle& f, const RingFamily& ring,
                  int cap_log2 = 20);

struct MvSfmResult {
  std::vector<uint64_t> minimizer;
  Rational value;
};

// Lifts g, minimizes over the multivariate ring on the lifted space, and
// maps the answer back to a tuple.
MvSfmResult SfmMvRing(const MultivariateOracle& g, const RingFamily& lifted_ring,
                      int cap_log2 = 20);

struct DualFeasibility {
  bool feasible = true;
  std::optional<uint64_t> violated_set;  // S with f(S) < z_y(S)
  Rational slack;                        // min_S f(S) - z_y(S)
};

// Checks dual feasibility of blocker weights y >= 0 for the covering LP:
// builds the modular load z_y(S) = sum_{v in S} sum_{B ni v} y_B and tests
// min_S f(S) - z_y(S) >= 0 via SFM (brute under the cap, min-norm above).
DualFeasibility DualFeasible(const SubmodularOracle& f,
                             const std::vector<Rational>& y,
                             const Clutter& blocker, int brute_cap = 18);

}  // namespace masub

#endif  // MASUB_SFM_H_
