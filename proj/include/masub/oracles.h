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

#ifndef MASUB_ORACLES_H_
#define MASUB_ORACLES_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "masub/ground_set.h"
#include "masub/rational.h"

namespace masub {

struct OracleFlags {
  bool nonnegative = false;
  bool monotone = false;
  bool normalized = false;
};

// Set-function oracle f : 2^V -> Q. Values are memoized; oracles are
// immutable after construction and safe for concurrent evaluation.
class SubmodularOracle {
 public:
  SubmodularOracle(GroundSetPtr ground,
                   std::function<Rational(uint64_t)> evaluator,
                   OracleFlags flags, std::string name = "f");

  const GroundSetPtr& ground() const { return ground_; }
  const OracleFlags& flags() const { return flags_; }
  const std::string& name() const { return name_; }

  // Raw-bitmask evaluation (no domain check). Memoized.
  Rational Value(uint64_t bits) const;

 private:
  GroundSetPtr ground_;
  std::function<Rational(uint64_t)> evaluator_;
  OracleFlags flags_;
  std::string name_;
  mutable std::mutex mu_;
  mutable std::unordered_map<uint64_t, Rational> memo_;
};

using OraclePtr = std::shared_ptr<const SubmodularOracle>;

// Tuple-function oracle g : (2^V)^k -> Q, defined on all tuples (disjoint or
// not); feasible regions enforce disjointness separately.
class MultivariateOracle {
 public:
  MultivariateOracle(GroundSetPtr ground, int agents,
                     std::function<Rational(const std::vector<uint64_t>&)> evaluator,
                     OracleFlags flags, std::string name = "g");

  const GroundSetPtr& ground() const { return ground_; }
  int agents() const { return agents_; }
  const OracleFlags& flags() const { return flags_; }
  const std::string& name() const { return name_; }

  Rational Value(const std::vector<uint64_t>& parts) const;
  // Evaluation through the agent-major packed mask over [k] x V; requires
  // k*n <= 64. Validators and the lifting reduction work in this space.
  Rational ValuePacked(uint64_t packed) const;

 private:
  uint64_t PackKey(const std::vector<uint64_t>& parts) const;

  GroundSetPtr ground_;
  int agents_;
  std::function<Rational(const std::vector<uint64_t>&)> evaluator_;
  OracleFlags flags_;
  std::string name_;
  bool packable_;  // k*n <= 64, enables memoization
  mutable std::mutex mu_;
  mutable std::unordered_map<uint64_t, Rational> memo_;
};

using MvOraclePtr = std::shared_ptr<const MultivariateOracle>;

// k x k rational matrix for quadratic tuple objectives z^T A z. The function
// is multi-submodular iff a_ij + a_ji <= 0 for all i, j (including i = j).
struct QuadraticMatrix {
  int k = 0;
  std::vector<Rational> a;  // row-major k*k

  const Rational& at(int i, int j) const { return a[i * k + j]; }
  Rational& at(int i, int j) { return a[i * k + j]; }
  bool SatisfiesPairCondition() const;
};

// --- basic operations ---

Rational Evaluate(const SubmodularOracle& oracle, const Subset& s);
// f(S + v) - f(S); requires v not in S.
Rational Marginal(const SubmodularOracle& oracle, const Subset& s, int v);
Rational EvaluateTuple(const MultivariateOracle& oracle, const SetTuple& t);

// --- constructors ---

OraclePtr MakeModular(GroundSetPtr ground, std::vector<Rational> weights,
                      std::string name = "modular");

// f(S) = |union of covered items over chosen sets|, optionally weighted.
OraclePtr MakeCoverage(GroundSetPtr ground, std::vector<uint64_t> covers,
                       std::vector<Rational> item_weights = {},
                       std::string name = "coverage");

// f(S) = table[|S|]; the table must be concave nondecreasing for the
// monotone/submodular flags to be set.
OraclePtr MakeConcaveOfCardinality(GroundSetPtr ground,
                                   std::vector<Rational> table,
                                   std::string name = "concave-card");

class Matroid;  // from matroids.h
OraclePtr MakeWeightedMatroidRank(std::shared_ptr<const Matroid> matroid,
                                  std::vector<Rational> weights,
                                  std::string name = "matroid-rank");

// Cut function of an undirected graph whose edges are given as endpoint
// pairs; ground set = vertices.
OraclePtr MakeCutFunction(GroundSetPtr ground,
                          std::vector<std::pair<int, int>> edges,
                          std::vector<Rational> edge_weights = {},
                          std::string name = "cut");

// The three-task/two-agent allocation cost c(S) = cheapest split of S across
// the two published price lists; not submodular.
OraclePtr MakeGoelAllocation();

// g(S_1..S_k) = sum_i f_i(S_i); flags are ANDs of component flags.
MvOraclePtr MakeDecomposable(std::vector<OraclePtr> fs);

// g(T) = z^T A z with z_i = sum of element weights in S_i (weights default
// to 1).
MvOraclePtr MakeQuadratic(GroundSetPtr ground, QuadraticMatrix a,
                          std::vector<Rational> weights = {});

// Arbitrary tuple function backed by a dense table indexed by the packed
// agent-major bitmask; used by generators and tests.
MvOraclePtr MakeTableMultivariate(GroundSetPtr ground, int agents,
                                  std::vector<Rational> table,
                                  OracleFlags flags,
                                  std::string name = "table");

// --- validators (exhaustive, capped) ---

inline constexpr int kDefaultBruteForceCap = 16;       // univariate, on n
inline constexpr int kDefaultMultivariateCap = 12;     // on k*n

struct SubmodularityWitness {
  uint64_t s = 0;
  uint64_t t = 0;  // S subset of T, v not in T, marginal(v|S) < marginal(v|T)
  int v = -1;
};

struct SubmodularityResult {
  bool holds = true;
  std::optional<SubmodularityWitness> witness;
};

// Checks diminishing returns f(S+v)-f(S) >= f(T+v)-f(T) for all S subset T,
// v not in T. The scan runs the adjacent form (T = S+u), which is equivalent
// by telescoping, and reports the first violation in (v, S, u) ascending
// order. Refuses when n exceeds the cap.
SubmodularityResult ValidateSubmodular(const SubmodularOracle& oracle,
                                       int cap = kDefaultBruteForceCap);

struct MonotonicityWitness {
  uint64_t s = 0;
  int v = -1;  // f(S+v) < f(S)
};
std::optional<MonotonicityWitness> FindMonotonicityViolation(
    const SubmodularOracle& oracle, int cap = kDefaultBruteForceCap);

struct MultiSubmodularityWitness {
  std::vector<uint64_t> tuple;
  int i = -1, v = -1;  // the pair (i,v) whose marginal grows
  int j = -1, u = -1;  // after adding (j,u)
};

struct MultiSubmodularityResult {
  bool holds = true;
  std::optional<MultiSubmodularityWitness> witness;
};

enum class MvCheckForm {
  kDiminishingReturns,  // condition over tuples and pairs (i,v),(j,u)
  kUnionIntersection,   // g(S)+g(T) >= g(S cup T)+g(S cap T) componentwise
};

// Both forms are provided and must agree; the diminishing-returns form is the
// default. Refuses when k*n exceeds the cap.
MultiSubmodularityResult ValidateMultiSubmodular(
    const MultivariateOracle& oracle,
    MvCheckForm form = MvCheckForm::kDiminishingReturns,
    int cap = kDefaultMultivariateCap);

// Tuple-wise monotonicity: adding any (i,v) never decreases g.
bool MultivariateMonotone(const MultivariateOracle& oracle,
                          int cap = kDefaultMultivariateCap);

}  // namespace masub

#endif  // MASUB_ORACLES_H_
