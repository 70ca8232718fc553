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

#include "masub/blockers.h"

#include <algorithm>
#include <utility>

#include "masub/errors.h"

namespace masub {

namespace {

// Drops supersets and duplicates.
std::vector<uint64_t> Minimalize(std::vector<uint64_t> sets) {
  std::sort(sets.begin(), sets.end(), [](uint64_t a, uint64_t b) {
    int ca = std::popcount(a), cb = std::popcount(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  std::vector<uint64_t> out;
  for (uint64_t s : sets) {
    bool dominated = false;
    for (uint64_t kept : out) {
      if ((kept & ~s) == 0) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Clutter::Clutter(GroundSetPtr ground, std::vector<uint64_t> members)
    : ground_(std::move(ground)), members_(Minimalize(std::move(members))) {
  for (uint64_t m : members_) {
    if (m & ~ground_->full_mask()) {
      throw DomainMismatchError("clutter member outside the ground set");
    }
  }
}

bool Clutter::Equals(const Clutter& other) const {
  return ground_->SameAs(*other.ground_) && members_ == other.members_;
}

FractionalPoint FractionalPoint::Zeros(GroundSetPtr ground) {
  FractionalPoint p;
  p.z.assign(ground->size(), Rational(0));
  p.ground = std::move(ground);
  return p;
}

FractionalPoint FractionalPoint::Indicator(const Subset& s) {
  FractionalPoint p = Zeros(s.ground);
  ForEachBit(s.bits, [&](int v) { p.z[v] = 1; });
  return p;
}

Rational FractionalPoint::Sum(uint64_t mask) const {
  Rational sum = 0;
  ForEachBit(mask, [&](int v) { sum += z[v]; });
  return sum;
}

Clutter ComputeBlocker(const Clutter& family, int cap) {
  int n = family.ground()->size();
  if (n > cap) {
    throw CapExceededError("compute_blocker: n=" + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
  }
  // Minimal transversals by enumeration: B is a transversal iff it meets
  // every member; keep the minimal ones.
  std::vector<uint64_t> transversals;
  uint64_t full = family.ground()->full_mask();
  for (uint64_t b = 0; b <= full; ++b) {
    bool hits_all = true;
    for (uint64_t m : family.members()) {
      if ((b & m) == 0) {
        hits_all = false;
        break;
      }
    }
    if (hits_all) {
      // Quick minimality pre-check: dropping any element must miss some
      // member. Cheap because members lists are tiny at desk scale.
      bool minimal = true;
      uint64_t rest = b;
      while (rest && minimal) {
        int v = std::countr_zero(rest);
        rest &= rest - 1;
        uint64_t reduced = b & ~(uint64_t{1} << v);
        bool still = true;
        for (uint64_t m : family.members()) {
          if ((reduced & m) == 0) {
            still = false;
            break;
          }
        }
        if (still) minimal = false;
      }
      if (minimal) transversals.push_back(b);
    }
    if (b == full) break;
  }
  return Clutter(family.ground(), std::move(transversals));
}

bool VerifyLehman(const Clutter& clutter, int cap) {
  Clutter once = ComputeBlocker(clutter, cap);
  Clutter twice = ComputeBlocker(once, cap);
  return twice.Equals(clutter);
}

bool UpwardClosureMembership(const Clutter& clutter, uint64_t s) {
  for (uint64_t m : clutter.members()) {
    if ((m & ~s) == 0) return true;
  }
  return false;
}

BlockingFamily BlockingFamily::FromBlocker(Clutter blocker,
                                           std::optional<int> beta) {
  BlockingFamily f;
  f.ground_ = blocker.ground();
  f.kind_ = "explicit";
  f.beta_bound_ = beta;
  if (!beta) {
    // Every member bounded by the largest one; an empty blocker is vacuously
    // 1-bounded (the family is all of 2^V).
    int max_size = 1;
    for (uint64_t m : blocker.members()) {
      max_size = std::max(max_size, std::popcount(m));
    }
    f.beta_bound_ = max_size;
  }
  f.explicit_blocker_ = std::move(blocker);
  return f;
}

BlockingFamily BlockingFamily::VertexCover(GroundSetPtr vertices,
                                           const Graph& graph) {
  if (vertices->size() != graph.num_nodes) {
    throw PreconditionError("vertex cover ground set must index the nodes");
  }
  std::vector<uint64_t> edges;
  for (auto [u, v] : graph.edges) {
    if (u == v) {
      throw PreconditionError("vertex cover does not support self-loops");
    }
    edges.push_back((uint64_t{1} << u) | (uint64_t{1} << v));
  }
  BlockingFamily f = FromBlocker(Clutter(vertices, std::move(edges)), 2);
  f.kind_ = "vertex-cover";
  return f;
}

BlockingFamily BlockingFamily::EdgeCover(GroundSetPtr edge_ground,
                                         const Graph& graph) {
  if (edge_ground->size() != graph.num_edges()) {
    throw PreconditionError("edge cover ground set must index the edges");
  }
  std::vector<uint64_t> stars(graph.num_nodes, 0);
  for (int e = 0; e < graph.num_edges(); ++e) {
    stars[graph.edges[e].first] |= uint64_t{1} << e;
    stars[graph.edges[e].second] |= uint64_t{1} << e;
  }
  for (int v = 0; v < graph.num_nodes; ++v) {
    if (stars[v] == 0) {
      throw InfeasibleError("edge cover impossible: isolated vertex");
    }
  }
  int max_deg = 0;
  for (uint64_t s : stars) max_deg = std::max(max_deg, std::popcount(s));
  BlockingFamily f =
      FromBlocker(Clutter(edge_ground, std::move(stars)), max_deg);
  f.kind_ = "edge-cover";
  return f;
}

BlockingFamily BlockingFamily::HittingSet(GroundSetPtr ground,
                                          std::vector<uint64_t> hyperedges) {
  for (uint64_t h : hyperedges) {
    if (h == 0) throw InfeasibleError("empty hyperedge cannot be hit");
  }
  BlockingFamily f =
      FromBlocker(Clutter(std::move(ground), std::move(hyperedges)),
                  std::nullopt);
  f.kind_ = "hitting-set";
  return f;
}

BlockingFamily BlockingFamily::Cardinality(GroundSetPtr ground, int m) {
  int n = ground->size();
  if (m < 0 || m > n) {
    throw PreconditionError("cardinality family needs 0 <= m <= n");
  }
  BlockingFamily f;
  f.ground_ = ground;
  f.kind_ = "cardinality";
  int blocker_size = n - m + 1;
  if (m == 0) {
    // F = 2^V: empty blocker, everything feasible.
    f.explicit_blocker_ = Clutter(ground, {});
    f.beta_bound_ = std::nullopt;
    return f;
  }
  f.beta_bound_ = blocker_size;
  f.oracle_ = [n, blocker_size](const std::vector<Rational>& z) {
    // min_B z(B) over all (n-m+1)-subsets = sum of the smallest entries.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (z[a] != z[b]) return z[a] < z[b];
      return a < b;
    });
    Rational sum = 0;
    uint64_t mask = 0;
    for (int i = 0; i < blocker_size; ++i) {
      sum += z[order[i]];
      mask |= uint64_t{1} << order[i];
    }
    SeparationResult r;
    r.min_value = sum;
    r.blocker = mask;
    r.feasible = sum >= 1;
    return r;
  };
  return f;
}

BlockingFamily BlockingFamily::Full(GroundSetPtr ground) {
  std::vector<uint64_t> singletons;
  for (int v = 0; v < ground->size(); ++v) {
    singletons.push_back(uint64_t{1} << v);
  }
  BlockingFamily f =
      FromBlocker(Clutter(std::move(ground), std::move(singletons)), 1);
  f.kind_ = "full";
  return f;
}

BlockingFamily BlockingFamily::StPath(GroundSetPtr edge_ground, Graph graph,
                                      int s, int t) {
  if (edge_ground->size() != graph.num_edges()) {
    throw PreconditionError("st-path ground set must index the edges");
  }
  if (s == t || s < 0 || t < 0 || s >= graph.num_nodes ||
      t >= graph.num_nodes) {
    throw PreconditionError("st-path needs distinct nodes s != t in range");
  }
  BlockingFamily f;
  f.ground_ = edge_ground;
  f.kind_ = "st-path";
  auto g = std::make_shared<Graph>(std::move(graph));
  f.oracle_ = [g, s, t](const std::vector<Rational>& z) {
    // Exact min cut with capacities z: scale to integers, flow, unscale.
    BigInt scale = 1;
    for (const Rational& v : z) scale = lcm(scale, denominator(v));
    std::vector<BigInt> caps(z.size());
    for (size_t e = 0; e < z.size(); ++e) {
      caps[e] = numerator(z[e]) * (scale / denominator(z[e]));
    }
    MaxFlowResult flow = MaxFlow(*g, caps, s, t);
    SeparationResult r;
    r.min_value = Rational(flow.value, scale);
    r.blocker = flow.cut_edges;
    r.feasible = *r.min_value >= 1;
    return r;
  };
  return f;
}

BlockingFamily BlockingFamily::PrunedNetwork(GroundSetPtr edge_ground,
                                             const Graph& graph, int tau) {
  if (edge_ground->size() != graph.num_edges()) {
    throw PreconditionError("pruned network ground set must index the edges");
  }
  if (tau < 0) throw PreconditionError("tau must be >= 0");
  // Blocker: all sub-stars of size tau+1.
  std::vector<uint64_t> stars(graph.num_nodes, 0);
  for (int e = 0; e < graph.num_edges(); ++e) {
    stars[graph.edges[e].first] |= uint64_t{1} << e;
    stars[graph.edges[e].second] |= uint64_t{1} << e;
  }
  std::vector<uint64_t> members;
  for (int v = 0; v < graph.num_nodes; ++v) {
    std::vector<int> inc = MaskToElements(stars[v]);
    int d = static_cast<int>(inc.size());
    if (d < tau + 1) continue;
    // All (tau+1)-subsets of the star at v.
    std::vector<int> idx(tau + 1);
    for (int i = 0; i <= tau; ++i) idx[i] = i;
    while (true) {
      uint64_t m = 0;
      for (int i : idx) m |= uint64_t{1} << inc[i];
      members.push_back(m);
      int pos = tau;
      while (pos >= 0 && idx[pos] == d - (tau + 1) + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i <= tau; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  BlockingFamily f =
      FromBlocker(Clutter(edge_ground, std::move(members)), tau + 1);
  f.kind_ = "pruned-network";
  return f;
}

SeparationResult BlockingFamily::MinBlockerValue(
    const std::vector<Rational>& z) const {
  if (static_cast<int>(z.size()) != ground_->size()) {
    throw DomainMismatchError("separation point has the wrong dimension");
  }
  for (const Rational& v : z) {
    if (v < 0) throw PreconditionError("separation expects z >= 0");
  }
  if (oracle_) return oracle_(z);
  SeparationResult r;
  if (!explicit_blocker_ || explicit_blocker_->members().empty()) {
    r.feasible = true;
    return r;
  }
  for (uint64_t b : explicit_blocker_->members()) {
    Rational sum = 0;
    ForEachBit(b, [&](int v) { sum += z[v]; });
    if (!r.min_value || sum < *r.min_value) {
      r.min_value = sum;
      r.blocker = b;
    }
  }
  r.feasible = *r.min_value >= 1;
  return r;
}

SeparationResult BlockingFamily::Separate(const FractionalPoint& z) const {
  if (!z.ground || !z.ground->SameAs(*ground_)) {
    throw DomainMismatchError("separation point from a different ground set");
  }
  return MinBlockerValue(z.z);
}

bool BlockingFamily::UpwardMember(uint64_t s) const {
  std::vector<Rational> z(ground_->size(), Rational(0));
  ForEachBit(s, [&](int v) { z[v] = 1; });
  SeparationResult r = MinBlockerValue(z);
  return r.feasible;
}

BlockingFamily LiftSeparation(std::shared_ptr<const BlockingFamily> base,
                              int agents) {
  if (agents < 1) throw PreconditionError("lift_separation requires k >= 1");
  int n = base->ground()->size();
  if (agents * n > 64) {
    throw CapExceededError("lifted ground set exceeds 64 elements");
  }
  std::vector<std::string> labels;
  for (int i = 0; i < agents; ++i) {
    for (int v = 0; v < n; ++v) {
      labels.push_back(std::to_string(i) + ":" + base->ground()->label(v));
    }
  }
  GroundSetPtr lifted_ground = GroundSet::Create(std::move(labels));

  BlockingFamily f;
  f.ground_ = lifted_ground;
  f.kind_ = "lifted(" + base->kind() + ")";
  if (base->beta_bound()) f.beta_bound_ = *base->beta_bound() * agents;
  if (base->explicit_blocker()) {
    // B(H) = { union of the stars delta(v) over v in B }: explicit when the
    // base blocker is, which keeps exact LP solving available on E.
    std::vector<uint64_t> lifted_members;
    for (uint64_t b : base->explicit_blocker()->members()) {
      uint64_t lifted = 0;
      ForEachBit(b, [&](int v) {
        for (int i = 0; i < agents; ++i) {
          lifted |= uint64_t{1} << (i * n + v);
        }
      });
      lifted_members.push_back(lifted);
    }
    f.explicit_blocker_ = Clutter(lifted_ground, std::move(lifted_members));
  }
  f.oracle_ = [base, agents, n](const std::vector<Rational>& w) {
    // Project: z(v) = w(delta(v)).
    std::vector<Rational> z(n, Rational(0));
    for (int i = 0; i < agents; ++i) {
      for (int v = 0; v < n; ++v) z[v] += w[i * n + v];
    }
    SeparationResult r = base->MinBlockerValue(z);
    if (r.blocker) {
      uint64_t lifted = 0;
      ForEachBit(*r.blocker, [&](int v) {
        for (int i = 0; i < agents; ++i) {
          lifted |= uint64_t{1} << (i * n + v);
        }
      });
      r.blocker = lifted;
    }
    return r;
  };
  return f;
}

uint64_t PruneToMinimal(uint64_t s, const BlockingFamily& family) {
  if (!family.UpwardMember(s)) {
    throw InfeasibleError("prune_to_minimal: input set is not feasible");
  }
  // Ascending index order; removals only shrink the set, so one pass is
  // stable for an upward-closed family.
  uint64_t current = s;
  for (int v = 0; v < family.ground()->size(); ++v) {
    uint64_t bit = uint64_t{1} << v;
    if (!(current & bit)) continue;
    if (family.UpwardMember(current & ~bit)) current &= ~bit;
  }
  return current;
}

}  // namespace masub
