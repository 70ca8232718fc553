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

#ifndef MASUB_SIMPLEX_H_
#define MASUB_SIMPLEX_H_

#include <vector>

#include "masub/rational.h"

namespace masub {

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kOptimal;
  Rational objective;
  std::vector<Rational> x;
  std::vector<Rational> duals;  // one multiplier per row at optimality
};

// Exact two-phase primal simplex with Bland's rule for
//   min c^T x  s.t.  A x >= b, x >= 0.
// Sized for desk-scale covering LPs (hundreds of columns, tens of rows).
LpResult SolveCoveringLp(const std::vector<std::vector<Rational>>& a,
                         const std::vector<Rational>& b,
                         const std::vector<Rational>& c);

}  // namespace masub

#endif  // MASUB_SIMPLEX_H_
