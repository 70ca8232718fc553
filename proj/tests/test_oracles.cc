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

#include <atomic>
#include <thread>

#include "masub/errors.h"
#include "masub/matroids.h"
#include "masub/oracles.h"
#include "test_util.h"

using namespace masub;

namespace {

Subset S(const GroundSetPtr& g, uint64_t bits) { return Subset(bits, g); }

MvOraclePtr OffDiagQuadratic(const GroundSetPtr& ground) {
  QuadraticMatrix a;
  a.k = 2;
  a.a = {Rational(0), Rational(-1), Rational(0), Rational(0)};
  return MakeQuadratic(ground, a);
}

}  // namespace

TEST_CASE("evaluate on coverage and normalized oracles") {
  auto ground = GroundSet::Create({"x", "y"});
  auto f = MakeCoverage(ground, {0b011, 0b110});
  CHECK(Evaluate(*f, S(ground, 0b11)) == 3);
  CHECK(Evaluate(*f, S(ground, 0)) == 0);

  auto goel = MakeGoelAllocation();
  CHECK(goel->Value(0b011) == 1);  // tasks {A,B}

  auto other = GroundSet::Create({"p", "q"});
  CHECK_THROWS_AS(Evaluate(*f, S(other, 1)), DomainMismatchError);
}

TEST_CASE("marginal values and preconditions") {
  auto ground = GroundSet::Indexed(3);
  auto f = MakeModular(ground, {Rational(1), Rational(2), Rational(3)});
  CHECK(Marginal(*f, S(ground, 0b001), 2) == 3);
  CHECK_THROWS_AS(Marginal(*f, S(ground, 0b001), 0), PreconditionError);

  auto goel = MakeGoelAllocation();
  auto g3 = goel->ground();
  CHECK(Marginal(*goel, S(g3, 0b001), 1) == 0);  // B after {A}
  CHECK(Marginal(*goel, S(g3, 0b101), 1) == 1);  // B after {A,C}
}

TEST_CASE("evaluate_tuple basics") {
  auto ground = GroundSet::Indexed(2);
  auto f1 = MakeModular(ground, {Rational(1), Rational(0)});
  auto f2 = MakeModular(ground, {Rational(0), Rational(1)});
  auto g = MakeDecomposable({f1, f2});
  CHECK(EvaluateTuple(*g, SetTuple({0, 0}, ground)) == 0);
  CHECK(EvaluateTuple(*g, SetTuple({0b01, 0b10}, ground)) == 2);
  CHECK_THROWS_AS(EvaluateTuple(*g, SetTuple({0}, ground)),
                  DomainMismatchError);

  QuadraticMatrix zero;
  zero.k = 2;
  zero.a.assign(4, Rational(0));
  auto qz = MakeQuadratic(ground, zero);
  CHECK(EvaluateTuple(*qz, SetTuple({0b01, 0b10}, ground)) == 0);

  auto q = OffDiagQuadratic(ground);
  CHECK(EvaluateTuple(*q, SetTuple({0b01, 0b10}, ground)) == -1);
}

TEST_CASE("make_decomposable flags and singleton case") {
  auto ground = GroundSet::Indexed(2);
  auto f = MakeModular(ground, {Rational(2), Rational(5)});
  auto g = MakeDecomposable({f});
  for (uint64_t s = 0; s < 4; ++s) {
    CHECK(g->Value({s}) == f->Value(s));
  }
  CHECK(g->flags().monotone);
  CHECK(g->flags().normalized);
}

TEST_CASE("make_quadratic with weights") {
  auto ground = GroundSet::Create({"a", "b", "c"});
  auto q = OffDiagQuadratic(ground);
  // T = ({a,b},{c}): z = (2,1), value -2.
  CHECK(q->Value({0b011, 0b100}) == -2);

  QuadraticMatrix id;
  id.k = 2;
  id.a = {Rational(1), Rational(0), Rational(0), Rational(1)};
  auto qi = MakeQuadratic(ground, id);
  auto res = ValidateMultiSubmodular(*qi);
  CHECK_FALSE(res.holds);
  CHECK(res.witness.has_value());
}

TEST_CASE("validate_submodular verdicts and witnesses") {
  auto ground = GroundSet::Indexed(3);
  auto modular = MakeModular(ground, {Rational(1), Rational(2), Rational(3)});
  CHECK(ValidateSubmodular(*modular).holds);

  auto goel = MakeGoelAllocation();
  auto res = ValidateSubmodular(*goel);
  REQUIRE_FALSE(res.holds);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->s == 0b001);  // {A}
  CHECK(res.witness->t == 0b101);  // {A,C}
  CHECK(res.witness->v == 1);      // B
  // The witness marginals are 0 and 1.
  CHECK(goel->Value(0b011) - goel->Value(0b001) == 0);
  CHECK(goel->Value(0b111) - goel->Value(0b101) == 1);

  auto cover = MakeCoverage(ground, {0b011, 0b110, 0b101});
  CHECK(ValidateSubmodular(*cover).holds);

  auto big = MakeModular(GroundSet::Indexed(17), std::vector<Rational>(17, 1));
  CHECK_THROWS_AS(ValidateSubmodular(*big), CapExceededError);
}

TEST_CASE("validate_multisubmodular both forms and agreement") {
  auto ground = GroundSet::Indexed(2);
  auto f1 = MakeCoverage(ground, {0b01, 0b10});
  auto f2 = MakeCoverage(ground, {0b11, 0b10});
  auto dec = MakeDecomposable({f1, f2});
  CHECK(ValidateMultiSubmodular(*dec).holds);
  CHECK(ValidateMultiSubmodular(*dec, MvCheckForm::kUnionIntersection).holds);

  auto q = OffDiagQuadratic(ground);
  CHECK(ValidateMultiSubmodular(*q).holds);

  // Both checkers agree on random table oracles.
  testutil::Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    int n = testutil::RandInt(rng, 1, 2);
    int k = testutil::RandInt(rng, 1, 2);
    auto g = GroundSet::Indexed(n);
    std::vector<Rational> table(size_t{1} << (k * n));
    for (auto& v : table) v = testutil::RandInt(rng, 0, 4);
    table[0] = 0;
    auto oracle = MakeTableMultivariate(g, k, std::move(table), OracleFlags{});
    bool a = ValidateMultiSubmodular(*oracle).holds;
    bool b =
        ValidateMultiSubmodular(*oracle, MvCheckForm::kUnionIntersection)
            .holds;
    CHECK(a == b);
  }
}

TEST_CASE("goel allocation values") {
  auto goel = MakeGoelAllocation();
  CHECK(goel->Value(0) == 0);
  CHECK(goel->Value(0b111) == 2);
  CHECK(goel->Value(0b110) == 2);  // {B,C}
}

TEST_CASE("quadratic multi-submodularity iff pair condition") {
  testutil::Rng rng(11);
  int validated = 0, witnessed = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int k = testutil::RandInt(rng, 1, 3);
    // n >= 2 so that diagonal violations (adding two elements to one agent)
    // are realizable.
    int n = testutil::RandInt(rng, 2, 4);
    if (k * n > 10) continue;
    QuadraticMatrix a;
    a.k = k;
    a.a.resize(k * k);
    for (auto& v : a.a) v = Rational(testutil::RandInt(rng, -4, 4), 2);
    auto q = MakeQuadratic(GroundSet::Indexed(n), a);
    bool expect = a.SatisfiesPairCondition();
    auto res = ValidateMultiSubmodular(*q);
    CHECK(res.holds == expect);
    if (expect) {
      ++validated;
    } else {
      CHECK(res.witness.has_value());
      ++witnessed;
    }
  }
  CHECK(validated > 10);
  CHECK(witnessed > 10);
}

TEST_CASE("built-in constructors pass the validators") {
  testutil::Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    int n = testutil::RandInt(rng, 1, 7);
    auto ground = GroundSet::Indexed(n);
    auto f = testutil::RandomSubmodularOracle(rng, ground);
    CHECK(ValidateSubmodular(*f).holds);
    if (f->flags().monotone) {
      CHECK_FALSE(FindMonotonicityViolation(*f).has_value());
    }
    if (f->flags().normalized) CHECK(f->Value(0) == 0);
  }
  for (int trial = 0; trial < 15; ++trial) {
    int n = testutil::RandInt(rng, 1, 3);
    int k = testutil::RandInt(rng, 1, 3);
    auto ground = GroundSet::Indexed(n);
    std::vector<OraclePtr> fs;
    for (int i = 0; i < k; ++i) {
      fs.push_back(testutil::RandomMonotoneOracle(rng, ground));
    }
    auto g = MakeDecomposable(fs);
    CHECK(ValidateMultiSubmodular(*g).holds);
    CHECK(MultivariateMonotone(*g));
  }
}

TEST_CASE("memoization is observationally invisible") {
  auto ground = GroundSet::Indexed(4);
  int calls = 0;
  SubmodularOracle f(
      ground,
      [&calls](uint64_t bits) {
        ++calls;
        return Rational(std::popcount(bits));
      },
      OracleFlags{}, "counted");
  CHECK(f.Value(0b1010) == 2);
  CHECK(f.Value(0b1010) == 2);
  CHECK(calls == 1);
}

TEST_CASE("concurrent evaluation is safe") {
  auto ground = GroundSet::Indexed(10);
  auto f = MakeCoverage(ground, {1, 2, 4, 8, 16, 3, 6, 12, 24, 17});
  std::vector<std::thread> workers;
  std::atomic<bool> ok{true};
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&f, &ok] {
      for (uint64_t s = 0; s < 1024; ++s) {
        if (f->Value(s) != f->Value(s)) ok = false;
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(ok);
}

TEST_CASE("weighted matroid rank oracle is submodular") {
  auto ground = GroundSet::Indexed(4);
  auto m = MakeUniform(ground, 2);
  auto f = MakeWeightedMatroidRank(
      m, {Rational(3), Rational(1), Rational(2), Rational(2)});
  CHECK(f->Value(0b1111) == 5);  // top two weights
  CHECK(ValidateSubmodular(*f).holds);
}
