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

#ifndef MASUB_MATROIDS_H_
#define MASUB_MATROIDS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "masub/graphs.h"
#include "masub/ground_set.h"

namespace masub {

// Matroid exposed purely through its independence oracle; every construction
// in the lifting reduction needs only independence tests.
class Matroid {
 public:
  Matroid(GroundSetPtr ground, std::function<bool(uint64_t)> independence,
          std::string kind, std::optional<int> rank_hint = std::nullopt);

  const GroundSetPtr& ground() const { return ground_; }
  const std::string& kind() const { return kind_; }
  std::optional<int> rank_hint() const { return rank_hint_; }

  bool Independent(uint64_t bits) const;
  // Rank of a subset by greedy augmentation with the independence oracle.
  int Rank(uint64_t bits) const;
  int FullRank() const;

 private:
  GroundSetPtr ground_;
  std::function<bool(uint64_t)> independence_;
  std::string kind_;
  std::optional<int> rank_hint_;
  mutable std::mutex mu_;
  mutable std::unordered_map<uint64_t, bool> memo_;
};

using MatroidPtr = std::shared_ptr<const Matroid>;

// A p-fold intersection: a constraint family, not a matroid. Rank is
// deliberately unsupported.
struct MatroidIntersection {
  std::vector<MatroidPtr> parts;

  const GroundSetPtr& ground() const { return parts.front()->ground(); }
  int p() const { return static_cast<int>(parts.size()); }
  bool Independent(uint64_t bits) const;
};

// Bases of a matroid: membership(S) iff S independent and |S| = rank(V).
class BasesFamily {
 public:
  explicit BasesFamily(MatroidPtr matroid);
  const MatroidPtr& matroid() const { return matroid_; }
  int rank() const { return rank_; }
  bool IsBase(uint64_t bits) const;

 private:
  MatroidPtr matroid_;
  int rank_;
};

// --- constructors ---

// S independent iff |S| <= b.
MatroidPtr MakeUniform(GroundSetPtr ground, int b);
// Parts must partition the ground set; S independent iff
// |S cap part_j| <= cap_j for all j.
MatroidPtr MakePartition(GroundSetPtr ground, std::vector<uint64_t> parts,
                         std::vector<int> caps);
// Family must be laminar (pairwise nested or disjoint, checked).
MatroidPtr MakeLaminar(GroundSetPtr ground, std::vector<uint64_t> family,
                       std::vector<int> caps);
// Ground set = edge list of the multigraph; S independent iff forest.
MatroidPtr MakeGraphic(const Graph& graph,
                       GroundSetPtr ground = nullptr);
MatroidPtr MakeFree(GroundSetPtr ground);
// Disjoint-ground union: S independent iff each restriction to piece_i is
// independent in matroid_i. Overlapping pieces are rejected; general matroid
// union is out of scope.
MatroidPtr MakeUnion(std::vector<MatroidPtr> matroids,
                     std::vector<uint64_t> pieces, GroundSetPtr joint_ground);

// --- verification ---

struct MatroidAxiomWitness {
  enum class Kind { kEmptyDependent, kHereditary, kExchange } kind;
  uint64_t s = 0;
  uint64_t t = 0;
  int v = -1;
};

struct MatroidAxiomResult {
  bool holds = true;
  std::optional<MatroidAxiomWitness> witness;
};

// Exhaustively checks non-emptiness, hereditary closure (one element down),
// and the exchange axiom between independent sets of adjacent sizes; returns
// the first violation found. Refuses past the cap.
MatroidAxiomResult VerifyMatroidAxioms(const Matroid& m, int cap = 16);

// Same check against an arbitrary membership oracle (used for lifted
// families before they are wrapped as Matroid).
MatroidAxiomResult VerifyMatroidAxioms(
    const GroundSet& ground, const std::function<bool(uint64_t)>& indep,
    int cap = 16);

}  // namespace masub

#endif  // MASUB_MATROIDS_H_
