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

#ifndef MASUB_RING_FAMILY_H_
#define MASUB_RING_FAMILY_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "masub/ground_set.h"

namespace masub {

// Family closed under union and intersection, represented by an implication
// digraph (u -> w: u in S implies w in S) plus set bounds L <= S <= U.
// Members are the implication-closed sets in [L, U]; L is closed on
// construction and the bounds are checked for consistency.
class RingFamily {
 public:
  // Throws InfeasibleError when the closure of L escapes U (empty ring).
  RingFamily(GroundSetPtr ground,
             std::vector<std::pair<int, int>> implications, uint64_t forced_in,
             uint64_t allowed);

  static RingFamily Free(GroundSetPtr ground);

  const GroundSetPtr& ground() const { return ground_; }
  const std::vector<std::pair<int, int>>& implications() const {
    return implications_;
  }
  uint64_t forced_in() const { return forced_in_; }
  uint64_t allowed() const { return allowed_; }

  bool Member(uint64_t bits) const;
  // Implication closure of an arbitrary seed set.
  uint64_t Close(uint64_t bits) const;

  // Enumerates all members in ascending bitmask order. Refuses when the
  // candidate space 2^(|U \ L|) exceeds 2^cap_log2.
  std::vector<uint64_t> EnumerateMembers(int cap_log2 = 20) const;

 private:
  GroundSetPtr ground_;
  std::vector<std::pair<int, int>> implications_;
  uint64_t forced_in_ = 0;
  uint64_t allowed_ = 0;
  std::vector<uint64_t> implies_mask_;  // per element: direct successors
};

}  // namespace masub

#endif  // MASUB_RING_FAMILY_H_
