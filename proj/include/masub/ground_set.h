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

#ifndef MASUB_GROUND_SET_H_
#define MASUB_GROUND_SET_H_

#include <bit>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace masub {

class GroundSet;
using GroundSetPtr = std::shared_ptr<const GroundSet>;

// A finite labeled ground set V with elements indexed 0..n-1. Subsets are
// bitmasks, so n is capped at 64.
class GroundSet {
 public:
  static GroundSetPtr Create(std::vector<std::string> labels);
  // Labels "<prefix>0".."<prefix>{n-1}".
  static GroundSetPtr Indexed(int n, const std::string& prefix = "e");

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  uint64_t full_mask() const {
    int n = size();
    return n == 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
  }
  // Index of a label, or -1.
  int IndexOf(const std::string& label) const;

  // Two ground sets are compatible if they are the same object or carry
  // identical label sequences.
  bool SameAs(const GroundSet& other) const;

 private:
  explicit GroundSet(std::vector<std::string> labels)
      : labels_(std::move(labels)) {}
  std::vector<std::string> labels_;
};

// Subset of a ground set, carried with its domain so mismatched use is
// detectable.
struct Subset {
  uint64_t bits = 0;
  GroundSetPtr ground;

  Subset() = default;
  Subset(uint64_t b, GroundSetPtr g) : bits(b), ground(std::move(g)) {}

  int Count() const { return std::popcount(bits); }
  bool Contains(int v) const { return (bits >> v) & 1; }
};

// k subsets over one ground set. Components need not be disjoint; the
// partition_feasible flag reports whether they are.
struct SetTuple {
  std::vector<uint64_t> parts;
  GroundSetPtr ground;

  SetTuple() = default;
  SetTuple(std::vector<uint64_t> p, GroundSetPtr g)
      : parts(std::move(p)), ground(std::move(g)) {}

  int k() const { return static_cast<int>(parts.size()); }
  bool PairwiseDisjoint() const;
  uint64_t UnionMask() const;
  int TotalCount() const;
};

// Validates S against an expected domain; throws DomainMismatchError.
void CheckDomain(const Subset& s, const GroundSet& expected,
                 const char* where);
void CheckDomain(const SetTuple& t, const GroundSet& expected, int expected_k,
                 const char* where);

// --- bitmask helpers ---

inline bool MaskContains(uint64_t mask, int v) { return (mask >> v) & 1; }

// Calls fn(v) for each set bit, ascending.
template <typename Fn>
void ForEachBit(uint64_t mask, Fn fn) {
  while (mask) {
    int v = std::countr_zero(mask);
    fn(v);
    mask &= mask - 1;
  }
}

std::vector<int> MaskToElements(uint64_t mask);
std::string MaskToString(uint64_t mask, const GroundSet& ground);

}  // namespace masub

#endif  // MASUB_GROUND_SET_H_
