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

#ifndef MASUB_INSTANCE_H_
#define MASUB_INSTANCE_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "masub/blockers.h"
#include "masub/lifting.h"
#include "masub/matroids.h"
#include "masub/oracles.h"
#include "masub/ring_family.h"

namespace masub {

// A parsed problem: oracles, constraints, and task, plus the canonical
// serialized text it came from (the digest input).
struct Problem {
  GroundSetPtr ground;
  int k = 1;
  std::string task;  // min | max | robust | lp-only
  int tau = 0;
  uint64_t seed = 0;

  std::vector<OraclePtr> agent_oracles;  // per-agent objectives (decomposable)
  MvOraclePtr mv_oracle;                 // tuple objective (always available)

  std::shared_ptr<BlockingFamily> blocking;  // min / lp tasks
  std::optional<LiftInput> feasible;         // max / robust tasks
  std::vector<MatroidPtr> agent_matroids;    // F_i (empty = all free)
  std::optional<RingFamily> mv_ring;         // ring-constrained minimization

  std::vector<uint64_t> regions;  // V_i for MSCA algorithms
  std::vector<int> caps;          // b_i for the b-matching algorithm

  std::string canonical_text;  // line-delimited JSON, exactly as parsed
  std::string digest;          // 64-bit FNV-1a of canonical_text, hex
};

// Parses the line-delimited JSON instance format. Errors carry the line
// number and offending field.
Problem ParseInstanceText(const std::string& text);
Problem ParseInstanceFile(const std::string& path);

void WriteTextFile(const std::string& path, const std::string& text);

std::string DigestText(const std::string& text);

}  // namespace masub

#endif  // MASUB_INSTANCE_H_
