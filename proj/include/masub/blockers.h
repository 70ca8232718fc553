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

#ifndef MASUB_BLOCKERS_H_
#define MASUB_BLOCKERS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "masub/graphs.h"
#include "masub/ground_set.h"
#include "masub/rational.h"

namespace masub {

// Antichain of subsets. Construction minimalizes and deduplicates.
class Clutter {
 public:
  Clutter(GroundSetPtr ground, std::vector<uint64_t> members);

  const GroundSetPtr& ground() const { return ground_; }
  const std::vector<uint64_t>& members() const { return members_; }
  bool Equals(const Clutter& other) const;

 private:
  GroundSetPtr ground_;
  std::vector<uint64_t> members_;  // sorted, minimal, distinct
};

// Nonnegative rational vector over the ground set.
struct FractionalPoint {
  std::vector<Rational> z;
  GroundSetPtr ground;

  static FractionalPoint Zeros(GroundSetPtr ground);
  static FractionalPoint Indicator(const Subset& s);
  Rational Sum(uint64_t mask) const;
};

// B(F): the minimal sets meeting every member of F, by enumeration of
// minimal transversals. Refuses when n exceeds the cap.
Clutter ComputeBlocker(const Clutter& family, int cap = 20);

// Lehman duality check B(B(F)) == F.
bool VerifyLehman(const Clutter& clutter, int cap = 20);

// True iff S contains some member of the clutter (membership in the upward
// closure generated by the clutter).
bool UpwardClosureMembership(const Clutter& clutter, uint64_t s);

struct SeparationResult {
  bool feasible = true;
  // Violated blocker member with z(B) < 1 when infeasible; when the family
  // supports it, the minimizing member even when feasible.
  std::optional<uint64_t> blocker;
  // min over blocker members B of z(B); unset when the blocker is empty.
  std::optional<Rational> min_value;
};

// Upward-closed family given through its blocker, either explicitly or via a
// built-in separation oracle. Membership, separation over P*(F), and exact
// minimum blocker value all run in exact arithmetic.
class BlockingFamily {
 public:
  static BlockingFamily FromBlocker(Clutter blocker,
                                    std::optional<int> beta = std::nullopt);
  // F = vertex covers of a graph; blocker = edges; beta = 2.
  static BlockingFamily VertexCover(GroundSetPtr vertices, const Graph& graph);
  // F = edge covers; ground set = edges; blocker = vertex stars.
  static BlockingFamily EdgeCover(GroundSetPtr edge_ground, const Graph& graph);
  // F = hitting sets of the given (e.g. k-uniform) hyperedges; blocker =
  // the hyperedges themselves.
  static BlockingFamily HittingSet(GroundSetPtr ground,
                                   std::vector<uint64_t> hyperedges);
  // F = {S : |S| >= m}; separation via the n-m+1 smallest entries.
  static BlockingFamily Cardinality(GroundSetPtr ground, int m);
  // F = {V}; blocker = singletons; beta = 1.
  static BlockingFamily Full(GroundSetPtr ground);
  // F = edge sets containing an s-t path; blocker = minimal s-t cuts,
  // separated by exact rational max-flow.
  static BlockingFamily StPath(GroundSetPtr edge_ground, Graph graph, int s,
                               int t);
  // Lightly pruned networks: subgraphs keeping all but tau edges at every
  // node; blocker = sub-stars of size tau+1 (explicit at desk scale).
  static BlockingFamily PrunedNetwork(GroundSetPtr edge_ground,
                                      const Graph& graph, int tau);

  const GroundSetPtr& ground() const { return ground_; }
  const std::optional<int>& beta_bound() const { return beta_bound_; }
  const std::optional<Clutter>& explicit_blocker() const {
    return explicit_blocker_;
  }
  const std::string& kind() const { return kind_; }

  // min_B z(B) and an attaining member. Explicit sources scan all members
  // (most violated); oracle sources compute the exact minimum directly.
  SeparationResult MinBlockerValue(const std::vector<Rational>& z) const;
  SeparationResult Separate(const FractionalPoint& z) const;

  // chi^S feasibility: S meets every blocker member.
  bool UpwardMember(uint64_t s) const;

 private:
  BlockingFamily() = default;
  friend BlockingFamily LiftSeparation(
      std::shared_ptr<const BlockingFamily> base, int agents);

  GroundSetPtr ground_;
  std::string kind_;
  std::optional<int> beta_bound_;
  std::optional<Clutter> explicit_blocker_;
  std::function<SeparationResult(const std::vector<Rational>&)> oracle_;
};

// Separation for the lifted family H over E = [k] x V:
// w in P*(H) iff z with z(v) = w(delta(v)) lies in P*(F); a violated base
// blocker B maps to the union of the stars delta(v), v in B.
BlockingFamily LiftSeparation(std::shared_ptr<const BlockingFamily> base,
                              int agents);

// Removes elements in ascending index order while feasibility is preserved;
// the result is feasible and locally minimal. Throws InfeasibleError when
// the input is infeasible.
uint64_t PruneToMinimal(uint64_t s, const BlockingFamily& family);

}  // namespace masub

#endif  // MASUB_BLOCKERS_H_
