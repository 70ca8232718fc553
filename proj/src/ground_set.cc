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

#include "masub/ground_set.h"

#include <unordered_set>

#include "masub/errors.h"

namespace masub {

GroundSetPtr GroundSet::Create(std::vector<std::string> labels) {
  if (labels.empty()) throw PreconditionError("ground set must be nonempty");
  if (labels.size() > 64) {
    throw CapExceededError("ground sets are capped at 64 elements");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw PreconditionError("duplicate ground-set label '" + l + "'");
    }
  }
  return GroundSetPtr(new GroundSet(std::move(labels)));
}

GroundSetPtr GroundSet::Indexed(int n, const std::string& prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return Create(std::move(labels));
}

int GroundSet::IndexOf(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return -1;
}

bool GroundSet::SameAs(const GroundSet& other) const {
  return this == &other || labels_ == other.labels_;
}

bool SetTuple::PairwiseDisjoint() const {
  uint64_t seen = 0;
  for (uint64_t p : parts) {
    if (seen & p) return false;
    seen |= p;
  }
  return true;
}

uint64_t SetTuple::UnionMask() const {
  uint64_t u = 0;
  for (uint64_t p : parts) u |= p;
  return u;
}

int SetTuple::TotalCount() const {
  int c = 0;
  for (uint64_t p : parts) c += std::popcount(p);
  return c;
}

void CheckDomain(const Subset& s, const GroundSet& expected,
                 const char* where) {
  if (!s.ground || !s.ground->SameAs(expected)) {
    throw DomainMismatchError(std::string(where) +
                              ": subset from a different ground set");
  }
  if (s.bits & ~expected.full_mask()) {
    throw DomainMismatchError(std::string(where) +
                              ": subset has bits beyond the ground set");
  }
}

void CheckDomain(const SetTuple& t, const GroundSet& expected, int expected_k,
                 const char* where) {
  if (!t.ground || !t.ground->SameAs(expected)) {
    throw DomainMismatchError(std::string(where) +
                              ": tuple from a different ground set");
  }
  if (t.k() != expected_k) {
    throw DomainMismatchError(std::string(where) + ": tuple arity mismatch");
  }
  for (uint64_t p : t.parts) {
    if (p & ~expected.full_mask()) {
      throw DomainMismatchError(std::string(where) +
                                ": tuple has bits beyond the ground set");
    }
  }
}

std::vector<int> MaskToElements(uint64_t mask) {
  std::vector<int> out;
  ForEachBit(mask, [&](int v) { out.push_back(v); });
  return out;
}

std::string MaskToString(uint64_t mask, const GroundSet& ground) {
  std::string out = "{";
  bool first = true;
  ForEachBit(mask, [&](int v) {
    if (!first) out += ",";
    out += ground.label(v);
    first = false;
  });
  out += "}";
  return out;
}

}  // namespace masub
