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

#ifndef MASUB_LIFTING_H_
#define MASUB_LIFTING_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "masub/graphs.h"
#include "masub/ground_set.h"
#include "masub/matroids.h"
#include "masub/oracles.h"
#include "masub/ring_family.h"

namespace masub {

// The lifted space E = [k] x V of the multi-agent bipartite graph. Element
// (i, v) sits at index i*n + v (agent-major), fixed so that instance files
// and traces are reproducible.
class LiftedGroundSet {
 public:
  LiftedGroundSet(GroundSetPtr base, int agents);

  const GroundSetPtr& base() const { return base_; }
  const GroundSetPtr& lifted() const { return lifted_; }
  int agents() const { return agents_; }
  int base_size() const { return base_->size(); }
  int lifted_size() const { return lifted_->size(); }

  int Index(int agent, int v) const { return agent * base_size() + v; }
  int AgentOf(int index) const { return index / base_size(); }
  int ElementOf(int index) const { return index % base_size(); }

  // The bijection pi and its inverse, as raw masks.
  uint64_t Pack(const std::vector<uint64_t>& parts) const;
  std::vector<uint64_t> Unpack(uint64_t lifted_bits) const;

  // cov(Z): base elements covered by at least one agent.
  uint64_t Cov(uint64_t lifted_bits) const;
  // delta(v) = [k] x {v} as a lifted mask.
  uint64_t Delta(int v) const;
  // All components pairwise disjoint, i.e. |S cap delta(v)| <= 1 for all v.
  bool ComponentsDisjoint(uint64_t lifted_bits) const;

 private:
  GroundSetPtr base_;
  GroundSetPtr lifted_;
  int agents_;
};

using LiftedSpacePtr = std::shared_ptr<const LiftedGroundSet>;

Subset Lift(const LiftedGroundSet& space, const SetTuple& tuple);
SetTuple Unlift(const LiftedGroundSet& space, const Subset& lifted);

// f(S) = g(pi^{-1}(S)): submodular iff g multi-submodular, flags copied.
OraclePtr LiftOracle(const LiftedGroundSet& space, MvOraclePtr g);

// Input family F for the H-lift, one of the structured cases from the
// preserved-structure table.
struct LiftInput {
  enum class Kind { kMatroid, kIntersection, kBases, kAll, kFull };
  Kind kind = Kind::kAll;
  MatroidPtr matroid;                             // kMatroid
  std::optional<MatroidIntersection> intersection;  // kIntersection
  std::shared_ptr<const BasesFamily> bases;       // kBases
  GroundSetPtr ground;                            // kAll / kFull

  static LiftInput FromMatroid(MatroidPtr m);
  static LiftInput FromIntersection(MatroidIntersection mi);
  static LiftInput FromBases(std::shared_ptr<const BasesFamily> b);
  static LiftInput All(GroundSetPtr ground);   // F = 2^V
  static LiftInput Full(GroundSetPtr ground);  // F = {V}

  const GroundSetPtr& BaseGround() const;
};

// Lifted family over E with a structure tag recording which preserved-
// structure case applied.
struct LiftedFamily {
  enum class Tag {
    kMatroid,             // F matroid -> lifted matroid
    kPIntersection,       // F p-intersection -> p-intersection on E
    kBases,               // F bases -> bases of lifted matroid
    kPartitionAll,        // F = 2^V -> partition matroid, parts [k]x{v}
    kBasesOfPartition,    // F = {V} -> bases of that partition matroid
    kUnionMatroid,        // H' with all F_i matroids
    kRing,                // H' with all F_i ring families
    kMembershipOnly,
  };

  LiftedSpacePtr space;
  std::function<bool(uint64_t)> member;
  Tag tag = Tag::kMembershipOnly;
  MatroidPtr matroid;
  std::optional<MatroidIntersection> intersection;
  std::shared_ptr<const BasesFamily> bases;
  std::shared_ptr<const RingFamily> ring;
};

// H = {S : components disjoint and S_1 + ... + S_k in F}.
LiftedFamily LiftFamilyH(const LiftInput& f, int agents);

// H' = {S : S_i in F_i for all i}; all-matroid inputs produce the
// disjoint-ground matroid union, all-ring inputs a ring family on E.
LiftedFamily LiftFamilyHPrimeMatroids(std::vector<MatroidPtr> fs,
                                      LiftedSpacePtr space);
LiftedFamily LiftFamilyHPrimeRings(const std::vector<RingFamily>& fs,
                                   LiftedSpacePtr space);

// L = H cap H' as a matroid intersection on E: the lifted F-matroids plus
// one more matroid for the per-agent constraints (the H' union matroid, or
// the disjointness partition matroid when every F_i is free).
MatroidIntersection LiftConstraint(const LiftInput& f,
                                   const std::vector<MatroidPtr>& fs,
                                   LiftedSpacePtr space);

// Graph with k parallel copies of each edge; copy i of edge e has id
// i*m + e, matching the agent-major lifted index, so solutions map back to
// agents by copy index.
struct CopiedGraph {
  Graph original;
  Graph copied;
  int multiplicity = 1;

  int CopyEdgeId(int agent, int original_edge) const {
    return agent * original.num_edges() + original_edge;
  }
};
CopiedGraph CopyGraph(const Graph& graph, int k);

// Re-wraps a multivariate ring given over the lifted index space, verifying
// closure under componentwise union/intersection on the enumerated members
// at desk scale. Throws InfeasibleError on closure violations.
RingFamily LiftMvRing(const LiftedGroundSet& space, const RingFamily& d,
                      int enumerate_cap_log2 = 20);

}  // namespace masub

#endif  // MASUB_LIFTING_H_
