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

#ifndef MASUB_TESTS_TEST_UTIL_H_
#define MASUB_TESTS_TEST_UTIL_H_

#include <random>
#include <vector>

#include "masub/graphs.h"
#include "masub/oracles.h"

namespace masub::testutil {

using Rng = std::mt19937_64;

inline int RandInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random monotone nonnegative normalized oracle: modular, coverage, or
// concave-of-cardinality with integer data.
inline OraclePtr RandomMonotoneOracle(Rng& rng, const GroundSetPtr& ground) {
  int n = ground->size();
  switch (RandInt(rng, 0, 2)) {
    case 0: {
      std::vector<Rational> w(n);
      for (auto& x : w) x = RandInt(rng, 0, 6);
      return MakeModular(ground, std::move(w));
    }
    case 1: {
      int items = n + 2;
      std::vector<uint64_t> covers(n);
      for (auto& c : covers) {
        for (int it = 0; it < items; ++it) {
          if (RandInt(rng, 0, 2) == 0) c |= uint64_t{1} << it;
        }
        if (!c) c = uint64_t{1} << RandInt(rng, 0, items - 1);
      }
      return MakeCoverage(ground, std::move(covers));
    }
    default: {
      std::vector<Rational> table{0};
      int value = 0, inc = RandInt(rng, 2, 5);
      for (int s = 1; s <= n; ++s) {
        value += inc;
        table.emplace_back(value);
        if (inc > 0 && RandInt(rng, 0, 1)) --inc;
      }
      return MakeConcaveOfCardinality(ground, std::move(table));
    }
  }
}

// Random normalized submodular oracle, not necessarily monotone (adds cut
// functions to the monotone mix).
inline OraclePtr RandomSubmodularOracle(Rng& rng, const GroundSetPtr& ground) {
  int n = ground->size();
  if (RandInt(rng, 0, 2) == 0 && n >= 2) {
    std::vector<std::pair<int, int>> edges;
    std::vector<Rational> weights;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (RandInt(rng, 0, 1)) {
          edges.emplace_back(u, v);
          weights.emplace_back(RandInt(rng, 1, 3));
        }
      }
    }
    if (edges.empty()) {
      edges.emplace_back(0, 1);
      weights.emplace_back(1);
    }
    return MakeCutFunction(ground, std::move(edges), std::move(weights));
  }
  return RandomMonotoneOracle(rng, ground);
}

inline uint64_t RandomMask(Rng& rng, int n) {
  return std::uniform_int_distribution<uint64_t>(
      0, (n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1))(rng);
}

inline std::vector<Rational> RandomUnitBoxPoint(Rng& rng, int n,
                                                int denominator = 8) {
  std::vector<Rational> z(n);
  for (auto& v : z) v = Rational(RandInt(rng, 0, denominator), denominator);
  return z;
}

}  // namespace masub::testutil

#endif  // MASUB_TESTS_TEST_UTIL_H_
