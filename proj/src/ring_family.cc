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

#include "masub/ring_family.h"

#include <algorithm>
#include <utility>

#include "masub/errors.h"

namespace masub {

RingFamily::RingFamily(GroundSetPtr ground,
                       std::vector<std::pair<int, int>> implications,
                       uint64_t forced_in, uint64_t allowed)
    : ground_(std::move(ground)),
      implications_(std::move(implications)),
      allowed_(allowed) {
  int n = ground_->size();
  implies_mask_.assign(n, 0);
  for (auto [u, w] : implications_) {
    if (u < 0 || u >= n || w < 0 || w >= n) {
      throw PreconditionError("ring implication endpoint outside ground set");
    }
    implies_mask_[u] |= uint64_t{1} << w;
  }
  forced_in_ = Close(forced_in);
  if ((forced_in_ & ~allowed_) != 0) {
    throw InfeasibleError(
        "ring family is empty: closure of L escapes U");
  }
}

RingFamily RingFamily::Free(GroundSetPtr ground) {
  uint64_t full = ground->full_mask();
  return RingFamily(std::move(ground), {}, 0, full);
}

uint64_t RingFamily::Close(uint64_t bits) const {
  uint64_t cur = bits;
  while (true) {
    uint64_t next = cur;
    ForEachBit(cur, [&](int v) { next |= implies_mask_[v]; });
    if (next == cur) return cur;
    cur = next;
  }
}

bool RingFamily::Member(uint64_t bits) const {
  if ((forced_in_ & ~bits) != 0) return false;
  if ((bits & ~allowed_) != 0) return false;
  bool closed = true;
  ForEachBit(bits, [&](int v) {
    if (implies_mask_[v] & ~bits) closed = false;
  });
  return closed;
}

std::vector<uint64_t> RingFamily::EnumerateMembers(int cap_log2) const {
  uint64_t free_mask = allowed_ & ~forced_in_;
  int free_count = std::popcount(free_mask);
  if (free_count > cap_log2) {
    throw CapExceededError("ring enumeration: 2^" +
                           std::to_string(free_count) + " members exceed cap");
  }
  std::vector<int> free_elems = MaskToElements(free_mask);
  std::vector<uint64_t> members;
  // Ascending subset counter over the free positions keeps the output in
  // ascending bitmask order.
  for (uint64_t c = 0;; ++c) {
    uint64_t s = forced_in_;
    for (int j = 0; j < free_count; ++j) {
      if ((c >> j) & 1) s |= uint64_t{1} << free_elems[j];
    }
    if (Member(s)) members.push_back(s);
    if (c + 1 == (uint64_t{1} << free_count)) break;
  }
  // The counter order is not bitmask order when free positions interleave
  // with forced ones; sort to restore it.
  std::sort(members.begin(), members.end());
  return members;
}

}  // namespace masub
