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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "masub/errors.h"
#include "masub/lifting.h"
#include "masub/oracles.h"
#include "test_util.h"

using namespace masub;

TEST_CASE("pi is a bijection") {
  auto base = GroundSet::Indexed(2);
  LiftedGroundSet space(base, 2);
  CHECK(space.lifted_size() == 4);

  CHECK(Lift(space, SetTuple({0, 0}, base)).bits == 0);
  // T = ({0},{1}) maps to {(0,0),(1,1)} = indices {0, 3}.
  Subset lifted = Lift(space, SetTuple({0b01, 0b10}, base));
  CHECK(lifted.bits == 0b1001);
  SetTuple back = Unlift(space, lifted);
  CHECK(back.parts[0] == 0b01);
  CHECK(back.parts[1] == 0b10);

  testutil::Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<uint64_t> parts{testutil::RandomMask(rng, 2),
                                testutil::RandomMask(rng, 2)};
    SetTuple t(parts, base);
    SetTuple round = Unlift(space, Lift(space, t));
    CHECK(round.parts == parts);
  }
}

TEST_CASE("pi preserves componentwise union and intersection") {
  auto base = GroundSet::Indexed(5);
  LiftedGroundSet space(base, 2);
  uint64_t full = space.lifted()->full_mask();
  for (uint64_t a = 0; a <= full; a += 7) {  // strided exhaustive sweep
    for (uint64_t b = 0; b <= full; b += 13) {
      auto ta = space.Unpack(a);
      auto tb = space.Unpack(b);
      std::vector<uint64_t> uni(2), inter(2);
      for (int i = 0; i < 2; ++i) {
        uni[i] = ta[i] | tb[i];
        inter[i] = ta[i] & tb[i];
      }
      CHECK(space.Pack(uni) == (a | b));
      CHECK(space.Pack(inter) == (a & b));
    }
  }
}

TEST_CASE("lift_oracle values and flags") {
  auto base = GroundSet::Indexed(2);
  LiftedGroundSet space(base, 2);

  auto zero = std::make_shared<MultivariateOracle>(
      base, 2, [](const std::vector<uint64_t>&) { return Rational(0); },
      OracleFlags{}, "zero");
  auto fzero = LiftOracle(space, zero);
  for (uint64_t s = 0; s < 16; ++s) CHECK(fzero->Value(s) == 0);

  auto c1 = MakeModular(base, {Rational(1), Rational(2)});
  auto c2 = MakeModular(base, {Rational(3), Rational(4)});
  auto dec = MakeDecomposable({c1, c2});
  auto f = LiftOracle(space, dec);
  CHECK(f->flags().monotone);
  // Lifted weight of (i,v) equals c_i(v).
  CHECK(f->Value(uint64_t{1} << space.Index(0, 1)) == 2);
  CHECK(f->Value(uint64_t{1} << space.Index(1, 0)) == 3);
  CHECK(ValidateSubmodular(*f).holds);

  QuadraticMatrix a;
  a.k = 2;
  a.a = {Rational(0), Rational(-1), Rational(0), Rational(0)};
  auto q = MakeQuadratic(base, a);
  auto fq = LiftOracle(space, q);
  CHECK(ValidateSubmodular(*fq).holds);
}

TEST_CASE("lifted submodularity iff multi-submodularity") {
  testutil::Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    int n = testutil::RandInt(rng, 1, 2);
    int k = testutil::RandInt(rng, 1, 3);
    auto base = GroundSet::Indexed(n);
    std::vector<Rational> table(size_t{1} << (k * n));
    for (auto& v : table) v = testutil::RandInt(rng, 0, 5);
    table[0] = 0;
    auto g = MakeTableMultivariate(base, k, std::move(table), OracleFlags{});
    LiftedGroundSet space(base, k);
    auto f = LiftOracle(space, g);
    CHECK(ValidateSubmodular(*f).holds == ValidateMultiSubmodular(*g).holds);
    CHECK(MultivariateMonotone(*g) ==
          !FindMonotonicityViolation(*f).has_value());
  }
}

TEST_CASE("lift_family_H structured cases") {
  auto base = GroundSet::Indexed(3);

  SUBCASE("F = 2^V lifts to the disjointness partition matroid") {
    LiftedFamily h = LiftFamilyH(LiftInput::All(base), 2);
    CHECK(h.tag == LiftedFamily::Tag::kPartitionAll);
    REQUIRE(h.matroid);
    for (uint64_t s = 0; s <= h.space->lifted()->full_mask(); ++s) {
      CHECK(h.member(s) == h.space->ComponentsDisjoint(s));
    }
  }

  SUBCASE("F = uniform(b) lifts to a matroid") {
    auto input = LiftInput::FromMatroid(MakeUniform(base, 2));
    LiftedFamily h = LiftFamilyH(input, 2);
    CHECK(h.tag == LiftedFamily::Tag::kMatroid);
    CHECK(VerifyMatroidAxioms(*h.matroid).holds);
  }

  SUBCASE("F = {V} lifts to the bases of the partition matroid") {
    auto small = GroundSet::Indexed(2);
    LiftedFamily h = LiftFamilyH(LiftInput::Full(small), 2);
    CHECK(h.tag == LiftedFamily::Tag::kBasesOfPartition);
    int count = 0;
    for (uint64_t s = 0; s <= h.space->lifted()->full_mask(); ++s) {
      if (h.member(s)) ++count;
    }
    CHECK(count == 4);  // each of 2 elements picks one of 2 agents
  }

  SUBCASE("bases input keeps the base rank") {
    auto m = MakeUniform(base, 2);
    auto input = LiftInput::FromBases(std::make_shared<BasesFamily>(m));
    LiftedFamily h = LiftFamilyH(input, 2);
    CHECK(h.tag == LiftedFamily::Tag::kBases);
    CHECK(h.bases->rank() == 2);
    CHECK(VerifyMatroidAxioms(*h.matroid).holds);
  }

  SUBCASE("p-intersection lifts componentwise") {
    MatroidIntersection mi{{MakeUniform(base, 1), MakeUniform(base, 2)}};
    LiftedFamily h = LiftFamilyH(LiftInput::FromIntersection(mi), 2);
    CHECK(h.tag == LiftedFamily::Tag::kPIntersection);
    CHECK(h.intersection->p() == 2);
  }
}

TEST_CASE("lifted matroids satisfy the axioms for every base constructor") {
  testutil::Rng rng(29);
  for (int trial = 0; trial < 12; ++trial) {
    int n = testutil::RandInt(rng, 1, 5);
    int k = testutil::RandInt(rng, 1, 2);
    if (k * n > 10) continue;
    auto base = GroundSet::Indexed(n);
    MatroidPtr m;
    if (trial % 3 == 0) {
      m = MakeUniform(base, testutil::RandInt(rng, 0, n));
    } else if (trial % 3 == 1) {
      m = MakePartition(base, {base->full_mask()},
                        {testutil::RandInt(rng, 0, n)});
    } else {
      Graph g;
      g.num_nodes = std::max(2, n - 1);
      for (int e = 0; e < n; ++e) {
        int u = testutil::RandInt(rng, 0, g.num_nodes - 1);
        int v = testutil::RandInt(rng, 0, g.num_nodes - 1);
        if (u == v) v = (v + 1) % g.num_nodes;
        g.AddEdge(u, v);
      }
      m = MakeGraphic(g, base);
    }
    LiftedFamily h = LiftFamilyH(LiftInput::FromMatroid(m), k);
    CHECK(VerifyMatroidAxioms(*h.matroid).holds);
  }
}

TEST_CASE("lift_family_Hprime with matroids and ring families") {
  auto base = GroundSet::Indexed(2);
  auto space = std::make_shared<LiftedGroundSet>(base, 2);

  LiftedFamily free2 =
      LiftFamilyHPrimeMatroids({MakeFree(base), MakeFree(base)}, space);
  CHECK(free2.tag == LiftedFamily::Tag::kUnionMatroid);
  CHECK(free2.member(space->lifted()->full_mask()));

  LiftedFamily uni = LiftFamilyHPrimeMatroids(
      {MakeUniform(base, 1), MakeUniform(base, 2)}, space);
  for (uint64_t s = 0; s <= space->lifted()->full_mask(); ++s) {
    auto parts = space->Unpack(s);
    bool expected =
        std::popcount(parts[0]) <= 1 && std::popcount(parts[1]) <= 2;
    CHECK(uni.member(s) == expected);
  }

  // Interval families [L_i, U_i] are rings; the lift is a ring over E.
  RingFamily r0(base, {}, 0b01, 0b11);
  RingFamily r1(base, {}, 0b00, 0b01);
  LiftedFamily ring = LiftFamilyHPrimeRings({r0, r1}, space);
  CHECK(ring.tag == LiftedFamily::Tag::kRing);
  for (uint64_t s = 0; s <= space->lifted()->full_mask(); ++s) {
    auto parts = space->Unpack(s);
    CHECK(ring.member(s) == (r0.Member(parts[0]) && r1.Member(parts[1])));
  }
}

TEST_CASE("lift_constraint composes the intersection") {
  auto base = GroundSet::Indexed(4);
  auto space = std::make_shared<LiftedGroundSet>(base, 2);

  auto one = LiftConstraint(LiftInput::FromMatroid(MakeUniform(base, 2)),
                            {MakeFree(base), MakeFree(base)}, space);
  CHECK(one.p() == 2);

  MatroidIntersection mi{{MakeUniform(base, 2), MakeUniform(base, 3)}};
  auto two = LiftConstraint(LiftInput::FromIntersection(mi), {}, space);
  CHECK(two.p() == 3);

  // Membership agrees with the direct tuple check.
  auto f = MakeUniform(base, 2);
  auto direct = [&](uint64_t s) {
    auto parts = space->Unpack(s);
    SetTuple t(parts, base);
    return t.PairwiseDisjoint() && f->Independent(t.UnionMask());
  };
  for (uint64_t s = 0; s <= space->lifted()->full_mask(); ++s) {
    CHECK(one.Independent(s) == direct(s));
  }
}

TEST_CASE("copy_graph invariant families") {
  Graph triangle;
  triangle.num_nodes = 3;
  triangle.AddEdge(0, 1);
  triangle.AddEdge(1, 2);
  triangle.AddEdge(0, 2);

  CopiedGraph one = CopyGraph(triangle, 1);
  CHECK(one.copied.num_edges() == 3);

  CopiedGraph two = CopyGraph(triangle, 2);
  CHECK(two.copied.num_edges() == 6);
  CHECK(two.copied.num_nodes == 3);

  // Forest-feasibility equivalence on 4-node graphs with k = 2: a disjoint
  // tuple is forest-feasible on the original iff its image is a forest on
  // the copy.
  testutil::Rng rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    Graph g;
    g.num_nodes = 4;
    int m = testutil::RandInt(rng, 2, 5);
    for (int e = 0; e < m; ++e) {
      int u = testutil::RandInt(rng, 0, 3);
      int v = testutil::RandInt(rng, 0, 3);
      if (u == v) v = (v + 1) % 4;
      g.AddEdge(u, v);
    }
    auto base = GroundSet::Indexed(m);
    LiftedGroundSet space(base, 2);
    CopiedGraph copied = CopyGraph(g, 2);
    for (uint64_t s = 0; s <= space.lifted()->full_mask(); ++s) {
      auto parts = space.Unpack(s);
      SetTuple t(parts, base);
      if (!t.PairwiseDisjoint()) continue;
      bool direct = IsForest(g, t.UnionMask());
      uint64_t image = 0;
      for (int i = 0; i < 2; ++i) {
        ForEachBit(parts[i], [&](int e) {
          image |= uint64_t{1} << copied.CopyEdgeId(i, e);
        });
      }
      CHECK(direct == IsForest(copied.copied, image));
    }
  }
}

TEST_CASE("st-path predicates on the copied graph") {
  Graph path;  // 0 - 1 - 2 plus a chord 0 - 2
  path.num_nodes = 3;
  path.AddEdge(0, 1);
  path.AddEdge(1, 2);
  path.AddEdge(0, 2);
  CHECK(IsExactStPath(path, 0b011, 0, 2));
  CHECK_FALSE(IsExactStPath(path, 0b111, 0, 2));
  CHECK(ContainsStPath(path, 0b111, 0, 2));
  CHECK_FALSE(ContainsStPath(path, 0b001, 0, 2));
}

TEST_CASE("lift_mv_ring verifies closure") {
  auto base = GroundSet::Indexed(2);
  LiftedGroundSet space(base, 2);

  RingFamily free = RingFamily::Free(space.lifted());
  RingFamily lifted = LiftMvRing(space, free);
  CHECK(lifted.Member(0));
  CHECK(lifted.Member(space.lifted()->full_mask()));

  // Implication (0,a) -> (1,b): membership matches the direct tuple test.
  int from = space.Index(0, 0), to = space.Index(1, 1);
  RingFamily imp(space.lifted(), {{from, to}}, 0, space.lifted()->full_mask());
  RingFamily verified = LiftMvRing(space, imp);
  for (uint64_t s = 0; s <= space.lifted()->full_mask(); ++s) {
    bool expected = !MaskContains(s, from) || MaskContains(s, to);
    CHECK(verified.Member(s) == expected);
  }

  CHECK_THROWS_AS(RingFamily(space.lifted(), {}, 0b1, 0b10), InfeasibleError);
}
