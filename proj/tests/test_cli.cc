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
#include "masub/instance.h"
#include "masub/runner.h"

using namespace masub;

namespace {

const char* kWelfareToy =
    R"({"record":"header","version":1,"labels":["g0","g1","g2"],"k":2,"task":"max","seed":7}
{"record":"oracle","agent":0,"kind":"modular","weights":[5,1,2]}
{"record":"oracle","agent":1,"kind":"modular","weights":[2,4,2]}
{"record":"constraint","kind":"full"}
)";

const char* kVcToy =
    R"({"record":"header","version":1,"labels":["v0","v1","v2"],"k":1,"task":"min","seed":1}
{"record":"oracle","agent":0,"kind":"modular","weights":[1,1,1]}
{"record":"constraint","kind":"vertex-cover","nodes":3,"edges":[[0,1],[1,2],[0,2]]}
)";

}  // namespace

TEST_CASE("parse a minimal welfare instance") {
  Problem p = ParseInstanceText(kWelfareToy);
  CHECK(p.k == 2);
  CHECK(p.task == "max");
  CHECK(p.ground->size() == 3);
  CHECK(p.agent_oracles.size() == 2);
  CHECK(p.mv_oracle);
  REQUIRE(p.feasible);
  CHECK(p.feasible->kind == LiftInput::Kind::kFull);
}

TEST_CASE("parse errors carry line positions and tags") {
  std::string bad = kWelfareToy;
  bad.replace(bad.find("modular"), 7, "mystery");
  try {
    ParseInstanceText(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
    CHECK(what.find("mystery") != std::string::npos);
  }

  CHECK_THROWS_AS(ParseInstanceText("{\"record\":\"oracle\"}\n"), ParseError);
  CHECK_THROWS_AS(ParseInstanceText("not json\n"), ParseError);
}

TEST_CASE("run welfare with greedy and the vc toy with rounding") {
  Problem welfare = ParseInstanceText(kWelfareToy);
  ReportRecord rec = Run(welfare, "ma-greedy");
  CHECK(rec.feasible);
  CHECK(rec.bound_ok);
  REQUIRE(rec.achieved_ratio);
  CHECK(*rec.achieved_ratio >= 0.5);

  Problem vc = ParseInstanceText(kVcToy);
  ReportRecord vrec = Run(vc, "bb-round");
  CHECK(vrec.feasible);
  CHECK(vrec.bound_ok);
  REQUIRE(vrec.achieved_ratio);
  CHECK(*vrec.achieved_ratio <= 2.0);
  REQUIRE(vrec.lp_value);
  CHECK(*vrec.lp_value == Rational(3, 2));

  ReportRecord lp = Run(vc, "lp-only");
  CHECK(lp.solution.contains("z"));
  CHECK(lp.objective == Rational(3, 2));

  CHECK_THROWS_AS(Run(vc, "ma-greedy"), Error);
}

TEST_CASE("reports are reproducible") {
  Problem vc = ParseInstanceText(kVcToy);
  auto a = Run(vc, "bb-round").ToJson();
  auto b = Run(vc, "bb-round").ToJson();
  a.erase("wall-seconds");
  b.erase("wall-seconds");
  CHECK(a == b);
}

TEST_CASE("corpus generation is deterministic and well-formed") {
  for (const auto& family : CorpusFamilies()) {
    auto first = GenerateCorpus(family, 3, 0);
    auto second = GenerateCorpus(family, 3, 0);
    CHECK(first == second);
    auto other_seed = GenerateCorpus(family, 3, 1);
    CHECK(first != other_seed);
    for (const auto& text : first) {
      Problem p = ParseInstanceText(text);
      CHECK(p.canonical_text == text);  // serialize-parse round trip
    }
  }
}

TEST_CASE("sensor corpus oracles are multi-submodular") {
  for (const auto& text : GenerateCorpus("sensor-quadratic", 4, 3)) {
    Problem p = ParseInstanceText(text);
    REQUIRE(p.mv_oracle);
    if (p.k * p.ground->size() <= 12) {
      CHECK(ValidateMultiSubmodular(*p.mv_oracle).holds);
    }
  }
}

TEST_CASE("pruned-network corpus blockers are sub-stars of size tau+1") {
  for (const auto& text : GenerateCorpus("pruned-network", 4, 5)) {
    Problem p = ParseInstanceText(text);
    REQUIRE(p.blocking);
    REQUIRE(p.blocking->explicit_blocker());
    REQUIRE(p.blocking->beta_bound());
    for (uint64_t b : p.blocking->explicit_blocker()->members()) {
      CHECK(std::popcount(b) == *p.blocking->beta_bound());
    }
  }
}

TEST_CASE("verify harness reports ok lines for generated instances") {
  for (const auto& text : GenerateCorpus("vertex-cover", 2, 9)) {
    Problem p = ParseInstanceText(text);
    for (const auto& line : VerifyProblem(p)) {
      CAPTURE(line);
      CHECK(line.rfind("ok", 0) == 0);
    }
  }
}

TEST_CASE("bench on a small mixed corpus stays within certified bounds") {
  std::vector<Problem> instances;
  for (const auto& family : {"vertex-cover", "welfare", "msca"}) {
    for (const auto& text : GenerateCorpus(family, 2, 11)) {
      instances.push_back(ParseInstanceText(text));
    }
  }
  BenchSummary summary = Bench(
      instances, {"bb-round", "ma-bb-round", "fracture", "ma-greedy",
                  "msca-greedy", "msca-bmatching"});
  CHECK(summary.ok);
  CHECK(!summary.records.empty());
  for (const auto& row : summary.rows) {
    CHECK(row.violations == 0);
  }
  // Output is sorted by instance digest.
  for (size_t i = 1; i < summary.records.size(); ++i) {
    CHECK(summary.records[i - 1].instance_digest <=
          summary.records[i].instance_digest);
  }

  BenchSummary empty = Bench({}, {"bb-round"});
  CHECK(empty.ok);
  CHECK(empty.rows.empty());
}

TEST_CASE("goel oracle is reachable from the instance format") {
  const char* text =
      R"({"record":"header","version":1,"labels":["A","B","C"],"k":1,"task":"min","seed":0}
{"record":"oracle","agent":0,"kind":"goel"}
{"record":"constraint","kind":"cardinality","m":0}
)";
  Problem p = ParseInstanceText(text);
  CHECK(p.agent_oracles[0]->Value(0b111) == 2);
}
