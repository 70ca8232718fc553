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

#include "masub/lifting.h"

#include <algorithm>
#include <utility>

#include "masub/errors.h"

namespace masub {

namespace {

GroundSetPtr BuildLiftedGround(const GroundSet& base, int agents) {
  std::vector<std::string> labels;
  labels.reserve(base.size() * agents);
  for (int i = 0; i < agents; ++i) {
    for (int v = 0; v < base.size(); ++v) {
      labels.push_back(std::to_string(i) + ":" + base.label(v));
    }
  }
  return GroundSet::Create(std::move(labels));
}

}  // namespace

LiftedGroundSet::LiftedGroundSet(GroundSetPtr base, int agents)
    : base_(std::move(base)), agents_(agents) {
  if (agents_ < 1) throw PreconditionError("lifting requires k >= 1");
  if (agents_ * base_->size() > 64) {
    throw CapExceededError("lifted ground set exceeds 64 elements");
  }
  lifted_ = BuildLiftedGround(*base_, agents_);
}

uint64_t LiftedGroundSet::Pack(const std::vector<uint64_t>& parts) const {
  if (static_cast<int>(parts.size()) != agents_) {
    throw DomainMismatchError("lift: tuple arity mismatch");
  }
  uint64_t bits = 0;
  int n = base_size();
  for (int i = 0; i < agents_; ++i) bits |= parts[i] << (i * n);
  return bits;
}

std::vector<uint64_t> LiftedGroundSet::Unpack(uint64_t lifted_bits) const {
  int n = base_size();
  uint64_t part_mask = n == 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
  std::vector<uint64_t> parts(agents_);
  for (int i = 0; i < agents_; ++i) {
    parts[i] = (lifted_bits >> (i * n)) & part_mask;
  }
  return parts;
}

uint64_t LiftedGroundSet::Cov(uint64_t lifted_bits) const {
  int n = base_size();
  uint64_t part_mask = n == 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
  uint64_t cov = 0;
  for (int i = 0; i < agents_; ++i) cov |= (lifted_bits >> (i * n)) & part_mask;
  return cov;
}

uint64_t LiftedGroundSet::Delta(int v) const {
  uint64_t mask = 0;
  for (int i = 0; i < agents_; ++i) mask |= uint64_t{1} << Index(i, v);
  return mask;
}

bool LiftedGroundSet::ComponentsDisjoint(uint64_t lifted_bits) const {
  int n = base_size();
  uint64_t part_mask = n == 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
  uint64_t seen = 0;
  for (int i = 0; i < agents_; ++i) {
    uint64_t part = (lifted_bits >> (i * n)) & part_mask;
    if (seen & part) return false;
    seen |= part;
  }
  return true;
}

Subset Lift(const LiftedGroundSet& space, const SetTuple& tuple) {
  CheckDomain(tuple, *space.base(), space.agents(), "lift");
  return Subset(space.Pack(tuple.parts), space.lifted());
}

SetTuple Unlift(const LiftedGroundSet& space, const Subset& lifted) {
  CheckDomain(lifted, *space.lifted(), "unlift");
  return SetTuple(space.Unpack(lifted.bits), space.base());
}

OraclePtr LiftOracle(const LiftedGroundSet& space, MvOraclePtr g) {
  if (!g->ground()->SameAs(*space.base()) || g->agents() != space.agents()) {
    throw DomainMismatchError("lift_oracle: oracle does not match the space");
  }
  return std::make_shared<SubmodularOracle>(
      space.lifted(),
      [g](uint64_t bits) { return g->ValuePacked(bits); }, g->flags(),
      "lift(" + g->name() + ")");
}

LiftInput LiftInput::FromMatroid(MatroidPtr m) {
  LiftInput in;
  in.kind = Kind::kMatroid;
  in.ground = m->ground();
  in.matroid = std::move(m);
  return in;
}

LiftInput LiftInput::FromIntersection(MatroidIntersection mi) {
  LiftInput in;
  in.kind = Kind::kIntersection;
  in.ground = mi.ground();
  in.intersection = std::move(mi);
  return in;
}

LiftInput LiftInput::FromBases(std::shared_ptr<const BasesFamily> b) {
  LiftInput in;
  in.kind = Kind::kBases;
  in.ground = b->matroid()->ground();
  in.bases = std::move(b);
  return in;
}

LiftInput LiftInput::All(GroundSetPtr ground) {
  LiftInput in;
  in.kind = Kind::kAll;
  in.ground = std::move(ground);
  return in;
}

LiftInput LiftInput::Full(GroundSetPtr ground) {
  LiftInput in;
  in.kind = Kind::kFull;
  in.ground = std::move(ground);
  return in;
}

const GroundSetPtr& LiftInput::BaseGround() const { return ground; }

namespace {

// The lifted matroid of Lemma MA->SA: independent iff components pairwise
// disjoint and their union is independent in the base matroid.
MatroidPtr LiftMatroid(LiftedSpacePtr space, MatroidPtr base) {
  auto indep = [space, base](uint64_t bits) {
    return space->ComponentsDisjoint(bits) &&
           base->Independent(space->Cov(bits));
  };
  return std::make_shared<Matroid>(space->lifted(), indep,
                                   "lifted-" + base->kind(),
                                   base->FullRank());
}

// Partition matroid with parts [k] x {v}, caps 1 (the F = 2^V case).
MatroidPtr DisjointnessMatroid(LiftedSpacePtr space) {
  std::vector<uint64_t> parts;
  std::vector<int> caps;
  for (int v = 0; v < space->base_size(); ++v) {
    parts.push_back(space->Delta(v));
    caps.push_back(1);
  }
  return MakePartition(space->lifted(), std::move(parts), std::move(caps));
}

}  // namespace

LiftedFamily LiftFamilyH(const LiftInput& f, int agents) {
  auto space = std::make_shared<LiftedGroundSet>(f.BaseGround(), agents);
  LiftedFamily out;
  out.space = space;
  switch (f.kind) {
    case LiftInput::Kind::kMatroid: {
      out.tag = LiftedFamily::Tag::kMatroid;
      out.matroid = LiftMatroid(space, f.matroid);
      auto m = out.matroid;
      out.member = [m](uint64_t bits) { return m->Independent(bits); };
      break;
    }
    case LiftInput::Kind::kIntersection: {
      out.tag = LiftedFamily::Tag::kPIntersection;
      MatroidIntersection lifted;
      for (const auto& m : f.intersection->parts) {
        lifted.parts.push_back(LiftMatroid(space, m));
      }
      out.intersection = lifted;
      auto mi = *out.intersection;
      out.member = [mi](uint64_t bits) { return mi.Independent(bits); };
      break;
    }
    case LiftInput::Kind::kBases: {
      out.tag = LiftedFamily::Tag::kBases;
      MatroidPtr lifted = LiftMatroid(space, f.bases->matroid());
      out.matroid = lifted;
      out.bases = std::make_shared<BasesFamily>(lifted);
      auto b = out.bases;
      out.member = [b](uint64_t bits) { return b->IsBase(bits); };
      break;
    }
    case LiftInput::Kind::kAll: {
      out.tag = LiftedFamily::Tag::kPartitionAll;
      out.matroid = DisjointnessMatroid(space);
      auto m = out.matroid;
      out.member = [m](uint64_t bits) { return m->Independent(bits); };
      break;
    }
    case LiftInput::Kind::kFull: {
      out.tag = LiftedFamily::Tag::kBasesOfPartition;
      MatroidPtr partition = DisjointnessMatroid(space);
      out.matroid = partition;
      out.bases = std::make_shared<BasesFamily>(partition);
      auto b = out.bases;
      out.member = [b](uint64_t bits) { return b->IsBase(bits); };
      break;
    }
  }
  return out;
}

LiftedFamily LiftFamilyHPrimeMatroids(std::vector<MatroidPtr> fs,
                                      LiftedSpacePtr space) {
  if (static_cast<int>(fs.size()) != space->agents()) {
    throw PreconditionError("lift_family_Hprime needs one F_i per agent");
  }
  for (const auto& m : fs) {
    if (!m->ground()->SameAs(*space->base())) {
      throw DomainMismatchError("F_i on the wrong ground set");
    }
  }
  std::vector<uint64_t> pieces;
  int n = space->base_size();
  uint64_t part_mask = n == 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
  for (int i = 0; i < space->agents(); ++i) {
    pieces.push_back(part_mask << (i * n));
  }
  LiftedFamily out;
  out.space = space;
  out.tag = LiftedFamily::Tag::kUnionMatroid;
  out.matroid = MakeUnion(std::move(fs), std::move(pieces), space->lifted());
  auto m = out.matroid;
  out.member = [m](uint64_t bits) { return m->Independent(bits); };
  return out;
}

LiftedFamily LiftFamilyHPrimeRings(const std::vector<RingFamily>& fs,
                                   LiftedSpacePtr space) {
  if (static_cast<int>(fs.size()) != space->agents()) {
    throw PreconditionError("lift_family_Hprime needs one F_i per agent");
  }
  int n = space->base_size();
  std::vector<std::pair<int, int>> implications;
  uint64_t forced = 0;
  uint64_t allowed = 0;
  for (int i = 0; i < space->agents(); ++i) {
    for (auto [u, w] : fs[i].implications()) {
      implications.emplace_back(space->Index(i, u), space->Index(i, w));
    }
    forced |= fs[i].forced_in() << (i * n);
    allowed |= fs[i].allowed() << (i * n);
  }
  LiftedFamily out;
  out.space = space;
  out.tag = LiftedFamily::Tag::kRing;
  out.ring = std::make_shared<RingFamily>(space->lifted(),
                                          std::move(implications), forced,
                                          allowed);
  auto r = out.ring;
  out.member = [r](uint64_t bits) { return r->Member(bits); };
  return out;
}

MatroidIntersection LiftConstraint(const LiftInput& f,
                                   const std::vector<MatroidPtr>& fs,
                                   LiftedSpacePtr space) {
  MatroidIntersection result;
  switch (f.kind) {
    case LiftInput::Kind::kMatroid:
      result.parts.push_back(LiftMatroid(space, f.matroid));
      break;
    case LiftInput::Kind::kIntersection:
      for (const auto& m : f.intersection->parts) {
        result.parts.push_back(LiftMatroid(space, m));
      }
      break;
    case LiftInput::Kind::kAll:
      result.parts.push_back(DisjointnessMatroid(space));
      break;
    default:
      throw PreconditionError(
          "lift_constraint expects a matroid, an intersection, or 2^V");
  }
  bool all_free = fs.empty() ||
                  std::all_of(fs.begin(), fs.end(), [](const MatroidPtr& m) {
                    return m->kind() == "free";
                  });
  if (all_free) {
    // H' is the free matroid; keep the disjointness partition matroid so the
    // intersection always encodes L = H cap H' explicitly.
    if (f.kind != LiftInput::Kind::kAll) {
      result.parts.push_back(DisjointnessMatroid(space));
    }
  } else {
    LiftedFamily hp = LiftFamilyHPrimeMatroids(fs, space);
    result.parts.push_back(hp.matroid);
  }
  return result;
}

CopiedGraph CopyGraph(const Graph& graph, int k) {
  if (k < 1) throw PreconditionError("copy_graph requires k >= 1");
  CopiedGraph out;
  out.original = graph;
  out.multiplicity = k;
  out.copied.num_nodes = graph.num_nodes;
  for (int i = 0; i < k; ++i) {
    for (const auto& [u, v] : graph.edges) out.copied.AddEdge(u, v);
  }
  return out;
}

RingFamily LiftMvRing(const LiftedGroundSet& space, const RingFamily& d,
                      int enumerate_cap_log2) {
  if (!d.ground()->SameAs(*space.lifted())) {
    throw DomainMismatchError(
        "lift_mv_ring expects a ring over the lifted index space");
  }
  RingFamily out = d;
  // Desk-scale closure certificate: componentwise union/intersection of
  // members stays inside the family.
  std::vector<uint64_t> members = out.EnumerateMembers(enumerate_cap_log2);
  for (size_t a = 0; a < members.size(); ++a) {
    for (size_t b = a + 1; b < members.size(); ++b) {
      if (!out.Member(members[a] | members[b]) ||
          !out.Member(members[a] & members[b])) {
        throw InfeasibleError("multivariate ring closure violated");
      }
    }
  }
  return out;
}

}  // namespace masub
