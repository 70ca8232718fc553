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

#include "masub/matroids.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "masub/errors.h"

namespace masub {

Matroid::Matroid(GroundSetPtr ground,
                 std::function<bool(uint64_t)> independence, std::string kind,
                 std::optional<int> rank_hint)
    : ground_(std::move(ground)),
      independence_(std::move(independence)),
      kind_(std::move(kind)),
      rank_hint_(rank_hint) {}

bool Matroid::Independent(uint64_t bits) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(bits);
  if (it != memo_.end()) return it->second;
  bool v = independence_(bits);
  memo_.emplace(bits, v);
  return v;
}

int Matroid::Rank(uint64_t bits) const {
  uint64_t picked = 0;
  int rank = 0;
  ForEachBit(bits, [&](int v) {
    uint64_t cand = picked | (uint64_t{1} << v);
    if (Independent(cand)) {
      picked = cand;
      ++rank;
    }
  });
  return rank;
}

int Matroid::FullRank() const {
  if (rank_hint_) return *rank_hint_;
  return Rank(ground_->full_mask());
}

bool MatroidIntersection::Independent(uint64_t bits) const {
  for (const auto& m : parts) {
    if (!m->Independent(bits)) return false;
  }
  return true;
}

BasesFamily::BasesFamily(MatroidPtr matroid)
    : matroid_(std::move(matroid)), rank_(matroid_->FullRank()) {}

bool BasesFamily::IsBase(uint64_t bits) const {
  return std::popcount(bits) == rank_ && matroid_->Independent(bits);
}

MatroidPtr MakeUniform(GroundSetPtr ground, int b) {
  if (b < 0 || b > ground->size()) {
    throw PreconditionError("uniform matroid needs 0 <= b <= n");
  }
  return std::make_shared<Matroid>(
      ground, [b](uint64_t bits) { return std::popcount(bits) <= b; },
      "uniform", b);
}

MatroidPtr MakePartition(GroundSetPtr ground, std::vector<uint64_t> parts,
                         std::vector<int> caps) {
  if (parts.size() != caps.size()) {
    throw PreconditionError("partition matroid needs one cap per part");
  }
  uint64_t seen = 0;
  for (uint64_t p : parts) {
    if (seen & p) throw PreconditionError("partition parts overlap");
    seen |= p;
  }
  if (seen != ground->full_mask()) {
    throw PreconditionError("partition parts must cover the ground set");
  }
  for (int c : caps) {
    if (c < 0) throw PreconditionError("partition caps must be >= 0");
  }
  int rank = 0;
  for (size_t j = 0; j < parts.size(); ++j) {
    rank += std::min(std::popcount(parts[j]), caps[j]);
  }
  auto ps = std::make_shared<std::vector<uint64_t>>(std::move(parts));
  auto cs = std::make_shared<std::vector<int>>(std::move(caps));
  return std::make_shared<Matroid>(
      ground,
      [ps, cs](uint64_t bits) {
        for (size_t j = 0; j < ps->size(); ++j) {
          if (std::popcount(bits & (*ps)[j]) > (*cs)[j]) return false;
        }
        return true;
      },
      "partition", rank);
}

MatroidPtr MakeLaminar(GroundSetPtr ground, std::vector<uint64_t> family,
                       std::vector<int> caps) {
  if (family.size() != caps.size()) {
    throw PreconditionError("laminar matroid needs one cap per family member");
  }
  for (size_t a = 0; a < family.size(); ++a) {
    for (size_t b = a + 1; b < family.size(); ++b) {
      uint64_t inter = family[a] & family[b];
      if (inter != 0 && inter != family[a] && inter != family[b]) {
        throw PreconditionError("family is not laminar");
      }
    }
  }
  for (int c : caps) {
    if (c < 0) throw PreconditionError("laminar caps must be >= 0");
  }
  auto fam = std::make_shared<std::vector<uint64_t>>(std::move(family));
  auto cs = std::make_shared<std::vector<int>>(std::move(caps));
  return std::make_shared<Matroid>(
      ground,
      [fam, cs](uint64_t bits) {
        for (size_t j = 0; j < fam->size(); ++j) {
          if (std::popcount(bits & (*fam)[j]) > (*cs)[j]) return false;
        }
        return true;
      },
      "laminar");
}

MatroidPtr MakeGraphic(const Graph& graph, GroundSetPtr ground) {
  if (!ground) ground = GroundSet::Indexed(graph.num_edges(), "edge");
  if (ground->size() != graph.num_edges()) {
    throw PreconditionError("graphic matroid ground set must index the edges");
  }
  auto g = std::make_shared<Graph>(graph);
  return std::make_shared<Matroid>(
      ground, [g](uint64_t bits) { return IsForest(*g, bits); }, "graphic");
}

MatroidPtr MakeFree(GroundSetPtr ground) {
  int n = ground->size();
  return std::make_shared<Matroid>(
      ground, [](uint64_t) { return true; }, "free", n);
}

MatroidPtr MakeUnion(std::vector<MatroidPtr> matroids,
                     std::vector<uint64_t> pieces, GroundSetPtr joint_ground) {
  if (matroids.size() != pieces.size() || matroids.empty()) {
    throw PreconditionError("matroid union needs one ground piece per matroid");
  }
  uint64_t seen = 0;
  for (uint64_t p : pieces) {
    if (seen & p) {
      throw PreconditionError(
          "matroid union pieces overlap; general matroid union is unsupported");
    }
    seen |= p;
  }
  if (seen != joint_ground->full_mask()) {
    throw PreconditionError("union pieces must cover the joint ground set");
  }
  // Each piece is mapped onto its matroid's ground by ascending index.
  std::vector<std::vector<int>> piece_elements;
  for (size_t i = 0; i < pieces.size(); ++i) {
    piece_elements.push_back(MaskToElements(pieces[i]));
    if (static_cast<int>(piece_elements.back().size()) !=
        matroids[i]->ground()->size()) {
      throw PreconditionError("piece size must match its matroid's ground");
    }
  }
  int rank = 0;
  for (const auto& m : matroids) rank += m->FullRank();
  auto ms = std::make_shared<std::vector<MatroidPtr>>(std::move(matroids));
  auto pe = std::make_shared<std::vector<std::vector<int>>>(
      std::move(piece_elements));
  return std::make_shared<Matroid>(
      joint_ground,
      [ms, pe](uint64_t bits) {
        for (size_t i = 0; i < ms->size(); ++i) {
          uint64_t local = 0;
          const auto& elems = (*pe)[i];
          for (size_t j = 0; j < elems.size(); ++j) {
            if (MaskContains(bits, elems[j])) local |= uint64_t{1} << j;
          }
          if (!(*ms)[i]->Independent(local)) return false;
        }
        return true;
      },
      "union", rank);
}

MatroidAxiomResult VerifyMatroidAxioms(
    const GroundSet& ground, const std::function<bool(uint64_t)>& indep,
    int cap) {
  int n = ground.size();
  if (n > cap) {
    throw CapExceededError("verify_matroid_axioms: n=" + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
  }
  if (!indep(0)) {
    MatroidAxiomWitness w;
    w.kind = MatroidAxiomWitness::Kind::kEmptyDependent;
    return {false, w};
  }
  uint64_t full = ground.full_mask();
  // Independent sets grouped by size; hereditary checked one element down,
  // which covers arbitrary subsets by chaining.
  std::vector<std::vector<uint64_t>> by_size(n + 1);
  for (uint64_t s = 0; s <= full; ++s) {
    if (!indep(s)) continue;
    by_size[std::popcount(s)].push_back(s);
    uint64_t rest = s;
    while (rest) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      if (!indep(s & ~(uint64_t{1} << v))) {
        MatroidAxiomWitness w;
        w.kind = MatroidAxiomWitness::Kind::kHereditary;
        w.s = s;
        w.v = v;
        return {false, w};
      }
    }
  }
  // Exchange between adjacent sizes (equivalent to the general form).
  for (int size = 0; size < n; ++size) {
    for (uint64_t t : by_size[size + 1]) {
      for (uint64_t s : by_size[size]) {
        bool found = false;
        uint64_t candidates = t & ~s;
        while (candidates) {
          int a = std::countr_zero(candidates);
          candidates &= candidates - 1;
          if (indep(s | (uint64_t{1} << a))) {
            found = true;
            break;
          }
        }
        if (!found) {
          MatroidAxiomWitness w;
          w.kind = MatroidAxiomWitness::Kind::kExchange;
          w.s = s;
          w.t = t;
          return {false, w};
        }
      }
    }
  }
  return {true, std::nullopt};
}

MatroidAxiomResult VerifyMatroidAxioms(const Matroid& m, int cap) {
  return VerifyMatroidAxioms(
      *m.ground(), [&m](uint64_t bits) { return m.Independent(bits); }, cap);
}

}  // namespace masub
