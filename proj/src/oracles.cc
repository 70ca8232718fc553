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

#include "masub/oracles.h"

#include <algorithm>
#include <utility>

#include "masub/errors.h"
#include "masub/matroids.h"

namespace masub {

SubmodularOracle::SubmodularOracle(GroundSetPtr ground,
                                   std::function<Rational(uint64_t)> evaluator,
                                   OracleFlags flags, std::string name)
    : ground_(std::move(ground)),
      evaluator_(std::move(evaluator)),
      flags_(flags),
      name_(std::move(name)) {
  if (!ground_) throw PreconditionError("oracle requires a ground set");
}

Rational SubmodularOracle::Value(uint64_t bits) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(bits);
  if (it != memo_.end()) return it->second;
  Rational v = evaluator_(bits);
  memo_.emplace(bits, v);
  return v;
}

MultivariateOracle::MultivariateOracle(
    GroundSetPtr ground, int agents,
    std::function<Rational(const std::vector<uint64_t>&)> evaluator,
    OracleFlags flags, std::string name)
    : ground_(std::move(ground)),
      agents_(agents),
      evaluator_(std::move(evaluator)),
      flags_(flags),
      name_(std::move(name)) {
  if (!ground_) throw PreconditionError("oracle requires a ground set");
  if (agents_ < 1) throw PreconditionError("k must be >= 1");
  packable_ = agents_ * ground_->size() <= 64;
}

uint64_t MultivariateOracle::PackKey(
    const std::vector<uint64_t>& parts) const {
  uint64_t key = 0;
  int n = ground_->size();
  for (int i = 0; i < agents_; ++i) key |= parts[i] << (i * n);
  return key;
}

Rational MultivariateOracle::Value(const std::vector<uint64_t>& parts) const {
  if (static_cast<int>(parts.size()) != agents_) {
    throw DomainMismatchError("tuple arity mismatch in evaluate_tuple");
  }
  if (!packable_) return evaluator_(parts);
  uint64_t key = PackKey(parts);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Rational v = evaluator_(parts);
  memo_.emplace(key, v);
  return v;
}

Rational MultivariateOracle::ValuePacked(uint64_t packed) const {
  if (!packable_) {
    throw CapExceededError("packed evaluation requires k*n <= 64");
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(packed);
    if (it != memo_.end()) return it->second;
  }
  int n = ground_->size();
  uint64_t part_mask = n == 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
  std::vector<uint64_t> parts(agents_);
  for (int i = 0; i < agents_; ++i) parts[i] = (packed >> (i * n)) & part_mask;
  Rational v = evaluator_(parts);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(packed, v);
  return v;
}

bool QuadraticMatrix::SatisfiesPairCondition() const {
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (at(i, j) + at(j, i) > 0) return false;
    }
  }
  return true;
}

Rational Evaluate(const SubmodularOracle& oracle, const Subset& s) {
  CheckDomain(s, *oracle.ground(), "evaluate");
  return oracle.Value(s.bits);
}

Rational Marginal(const SubmodularOracle& oracle, const Subset& s, int v) {
  CheckDomain(s, *oracle.ground(), "marginal");
  if (v < 0 || v >= oracle.ground()->size()) {
    throw PreconditionError("marginal: element outside the ground set");
  }
  if (MaskContains(s.bits, v)) {
    throw PreconditionError("marginal: element already in the set");
  }
  return oracle.Value(s.bits | (uint64_t{1} << v)) - oracle.Value(s.bits);
}

Rational EvaluateTuple(const MultivariateOracle& oracle, const SetTuple& t) {
  CheckDomain(t, *oracle.ground(), oracle.agents(), "evaluate_tuple");
  return oracle.Value(t.parts);
}

OraclePtr MakeModular(GroundSetPtr ground, std::vector<Rational> weights,
                      std::string name) {
  if (static_cast<int>(weights.size()) != ground->size()) {
    throw PreconditionError("modular oracle needs one weight per element");
  }
  OracleFlags flags;
  flags.normalized = true;
  flags.nonnegative = flags.monotone =
      std::all_of(weights.begin(), weights.end(),
                  [](const Rational& w) { return w >= 0; });
  auto w = std::make_shared<std::vector<Rational>>(std::move(weights));
  return std::make_shared<SubmodularOracle>(
      ground,
      [w](uint64_t bits) {
        Rational sum = 0;
        ForEachBit(bits, [&](int v) { sum += (*w)[v]; });
        return sum;
      },
      flags, std::move(name));
}

OraclePtr MakeCoverage(GroundSetPtr ground, std::vector<uint64_t> covers,
                       std::vector<Rational> item_weights, std::string name) {
  if (static_cast<int>(covers.size()) != ground->size()) {
    throw PreconditionError("coverage oracle needs one covered set per element");
  }
  auto sets = std::make_shared<std::vector<uint64_t>>(std::move(covers));
  auto weights =
      std::make_shared<std::vector<Rational>>(std::move(item_weights));
  for (const Rational& w : *weights) {
    if (w < 0) throw PreconditionError("coverage item weights must be >= 0");
  }
  OracleFlags flags;
  flags.normalized = flags.nonnegative = flags.monotone = true;
  return std::make_shared<SubmodularOracle>(
      ground,
      [sets, weights](uint64_t bits) {
        uint64_t covered = 0;
        ForEachBit(bits, [&](int v) { covered |= (*sets)[v]; });
        if (weights->empty()) return Rational(std::popcount(covered));
        Rational sum = 0;
        ForEachBit(covered, [&](int item) { sum += (*weights)[item]; });
        return sum;
      },
      flags, std::move(name));
}

OraclePtr MakeConcaveOfCardinality(GroundSetPtr ground,
                                   std::vector<Rational> table,
                                   std::string name) {
  int n = ground->size();
  if (static_cast<int>(table.size()) != n + 1) {
    throw PreconditionError("concave table needs n+1 entries");
  }
  for (int s = 2; s <= n; ++s) {
    if (table[s] - table[s - 1] > table[s - 1] - table[s - 2]) {
      throw PreconditionError("cardinality table is not concave");
    }
  }
  OracleFlags flags;
  flags.normalized = table[0] == 0;
  flags.nonnegative = std::all_of(table.begin(), table.end(),
                                  [](const Rational& v) { return v >= 0; });
  flags.monotone = true;
  for (int s = 1; s <= n; ++s) {
    if (table[s] < table[s - 1]) flags.monotone = false;
  }
  auto t = std::make_shared<std::vector<Rational>>(std::move(table));
  return std::make_shared<SubmodularOracle>(
      ground, [t](uint64_t bits) { return (*t)[std::popcount(bits)]; }, flags,
      std::move(name));
}

OraclePtr MakeWeightedMatroidRank(MatroidPtr matroid,
                                  std::vector<Rational> weights,
                                  std::string name) {
  const GroundSetPtr& ground = matroid->ground();
  if (static_cast<int>(weights.size()) != ground->size()) {
    throw PreconditionError("rank oracle needs one weight per element");
  }
  for (const Rational& w : weights) {
    if (w < 0) throw PreconditionError("rank weights must be >= 0");
  }
  // Elements in weight-descending order (ties by index); matroid greedy is
  // exact for the weighted rank.
  std::vector<int> order(ground->size());
  for (int i = 0; i < ground->size(); ++i) order[i] = i;
  auto w = std::make_shared<std::vector<Rational>>(std::move(weights));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if ((*w)[a] != (*w)[b]) return (*w)[a] > (*w)[b];
    return a < b;
  });
  OracleFlags flags;
  flags.normalized = flags.nonnegative = flags.monotone = true;
  return std::make_shared<SubmodularOracle>(
      ground,
      [matroid, w, order](uint64_t bits) {
        Rational sum = 0;
        uint64_t picked = 0;
        for (int v : order) {
          if (!MaskContains(bits, v)) continue;
          uint64_t cand = picked | (uint64_t{1} << v);
          if (matroid->Independent(cand)) {
            picked = cand;
            sum += (*w)[v];
          }
        }
        return sum;
      },
      flags, std::move(name));
}

OraclePtr MakeCutFunction(GroundSetPtr ground,
                          std::vector<std::pair<int, int>> edges,
                          std::vector<Rational> edge_weights,
                          std::string name) {
  if (!edge_weights.empty() && edge_weights.size() != edges.size()) {
    throw PreconditionError("cut oracle needs one weight per edge");
  }
  auto e = std::make_shared<std::vector<std::pair<int, int>>>(std::move(edges));
  auto w = std::make_shared<std::vector<Rational>>(std::move(edge_weights));
  OracleFlags flags;
  flags.normalized = true;
  flags.nonnegative = std::all_of(w->begin(), w->end(),
                                  [](const Rational& x) { return x >= 0; });
  flags.monotone = false;
  return std::make_shared<SubmodularOracle>(
      ground,
      [e, w](uint64_t bits) {
        Rational sum = 0;
        for (size_t i = 0; i < e->size(); ++i) {
          bool a = MaskContains(bits, (*e)[i].first);
          bool b = MaskContains(bits, (*e)[i].second);
          if (a != b) sum += w->empty() ? Rational(1) : (*w)[i];
        }
        return sum;
      },
      flags, std::move(name));
}

OraclePtr MakeGoelAllocation() {
  GroundSetPtr ground = GroundSet::Create({"A", "B", "C"});
  // Price tables over {A,B,C} indexed by bitmask (A=1, B=2, C=4). Unlisted
  // bundles cost the sum of singletons.
  auto price1 = std::make_shared<std::vector<Rational>>(
      std::vector<Rational>{0, 1, 1, 1, 1, 2, 2, 2});
  auto price2 = std::make_shared<std::vector<Rational>>(
      std::vector<Rational>{0, 1, 1, 2, 1, 1, 2, 2});
  OracleFlags flags;
  flags.normalized = flags.nonnegative = flags.monotone = true;
  return std::make_shared<SubmodularOracle>(
      ground,
      [price1, price2](uint64_t bits) {
        // Cheapest split of the tasks across the two agents.
        Rational best = (*price1)[bits];
        for (uint64_t t = bits; t > 0; t = (t - 1) & bits) {
          Rational cost = (*price1)[t] + (*price2)[bits & ~t];
          if (cost < best) best = cost;
        }
        // t = 0: everything to agent 2.
        Rational all2 = (*price2)[bits];
        if (all2 < best) best = all2;
        return best;
      },
      flags, "goel");
}

MvOraclePtr MakeDecomposable(std::vector<OraclePtr> fs) {
  if (fs.empty()) throw PreconditionError("decomposable oracle needs k >= 1");
  const GroundSetPtr& ground = fs.front()->ground();
  for (const auto& f : fs) {
    if (!f->ground()->SameAs(*ground)) {
      throw DomainMismatchError("decomposable components on mixed ground sets");
    }
  }
  OracleFlags flags;
  flags.normalized = flags.nonnegative = flags.monotone = true;
  for (const auto& f : fs) {
    flags.normalized = flags.normalized && f->flags().normalized;
    flags.nonnegative = flags.nonnegative && f->flags().nonnegative;
    flags.monotone = flags.monotone && f->flags().monotone;
  }
  int k = static_cast<int>(fs.size());
  auto shared = std::make_shared<std::vector<OraclePtr>>(std::move(fs));
  return std::make_shared<MultivariateOracle>(
      ground, k,
      [shared](const std::vector<uint64_t>& parts) {
        Rational sum = 0;
        for (size_t i = 0; i < parts.size(); ++i) {
          sum += (*shared)[i]->Value(parts[i]);
        }
        return sum;
      },
      flags, "decomposable");
}

MvOraclePtr MakeQuadratic(GroundSetPtr ground, QuadraticMatrix a,
                          std::vector<Rational> weights) {
  if (a.k < 1 || static_cast<int>(a.a.size()) != a.k * a.k) {
    throw PreconditionError("quadratic matrix must be k x k");
  }
  if (!weights.empty() &&
      static_cast<int>(weights.size()) != ground->size()) {
    throw PreconditionError("quadratic weights need one entry per element");
  }
  OracleFlags flags;
  flags.normalized = true;
  flags.nonnegative = false;
  flags.monotone = false;
  int k = a.k;
  auto mat = std::make_shared<QuadraticMatrix>(std::move(a));
  auto w = std::make_shared<std::vector<Rational>>(std::move(weights));
  return std::make_shared<MultivariateOracle>(
      ground, k,
      [mat, w](const std::vector<uint64_t>& parts) {
        std::vector<Rational> z(parts.size());
        for (size_t i = 0; i < parts.size(); ++i) {
          if (w->empty()) {
            z[i] = std::popcount(parts[i]);
          } else {
            Rational sum = 0;
            ForEachBit(parts[i], [&](int v) { sum += (*w)[v]; });
            z[i] = sum;
          }
        }
        Rational val = 0;
        for (int i = 0; i < mat->k; ++i) {
          for (int j = 0; j < mat->k; ++j) {
            if (mat->at(i, j) != 0) val += mat->at(i, j) * z[i] * z[j];
          }
        }
        return val;
      },
      flags, "quadratic");
}

MvOraclePtr MakeTableMultivariate(GroundSetPtr ground, int agents,
                                  std::vector<Rational> table,
                                  OracleFlags flags, std::string name) {
  int n = ground->size();
  if (agents * n > 24) {
    throw CapExceededError("table oracle limited to k*n <= 24");
  }
  if (table.size() != (size_t{1} << (agents * n))) {
    throw PreconditionError("table size must be 2^(k*n)");
  }
  auto t = std::make_shared<std::vector<Rational>>(std::move(table));
  return std::make_shared<MultivariateOracle>(
      ground, agents,
      [t, n](const std::vector<uint64_t>& parts) {
        uint64_t key = 0;
        for (size_t i = 0; i < parts.size(); ++i) key |= parts[i] << (i * n);
        return (*t)[key];
      },
      flags, std::move(name));
}

SubmodularityResult ValidateSubmodular(const SubmodularOracle& oracle,
                                       int cap) {
  int n = oracle.ground()->size();
  if (n > cap) {
    throw CapExceededError("validate_submodular: n=" + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
  }
  // Adjacent form of diminishing returns: marginal(v | S) >= marginal(v | S+u)
  // for all S and u, v outside S. Equivalent to the full S subset-of T form by
  // telescoping along a chain; witnesses are returned as (S, T=S+u, v) in
  // (v, S, u) ascending scan order.
  uint64_t full = oracle.ground()->full_mask();
  for (int v = 0; v < n; ++v) {
    uint64_t vbit = uint64_t{1} << v;
    for (uint64_t s = 0; s <= full; ++s) {
      if (s & vbit) continue;
      Rational base = oracle.Value(s | vbit) - oracle.Value(s);
      for (int u = 0; u < n; ++u) {
        uint64_t ubit = uint64_t{1} << u;
        if (u == v || (s & ubit)) continue;
        Rational larger =
            oracle.Value(s | ubit | vbit) - oracle.Value(s | ubit);
        if (base < larger) {
          return {false, SubmodularityWitness{s, s | ubit, v}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

std::optional<MonotonicityWitness> FindMonotonicityViolation(
    const SubmodularOracle& oracle, int cap) {
  int n = oracle.ground()->size();
  if (n > cap) {
    throw CapExceededError("monotonicity check: n exceeds cap");
  }
  uint64_t full = oracle.ground()->full_mask();
  for (uint64_t s = 0; s <= full; ++s) {
    for (int v = 0; v < n; ++v) {
      if (MaskContains(s, v)) continue;
      if (oracle.Value(s | (uint64_t{1} << v)) < oracle.Value(s)) {
        return MonotonicityWitness{s, v};
      }
    }
  }
  return std::nullopt;
}

namespace {

std::vector<uint64_t> UnpackTuple(uint64_t packed, int k, int n) {
  uint64_t part_mask = n == 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
  std::vector<uint64_t> parts(k);
  for (int i = 0; i < k; ++i) parts[i] = (packed >> (i * n)) & part_mask;
  return parts;
}

}  // namespace

MultiSubmodularityResult ValidateMultiSubmodular(
    const MultivariateOracle& oracle, MvCheckForm form, int cap) {
  int k = oracle.agents();
  int n = oracle.ground()->size();
  if (k * n > cap) {
    throw CapExceededError("validate_multisubmodular: k*n=" +
                           std::to_string(k * n) + " exceeds cap " +
                           std::to_string(cap));
  }
  int total = k * n;
  uint64_t full = total == 64 ? ~uint64_t{0} : ((uint64_t{1} << total) - 1);

  if (form == MvCheckForm::kUnionIntersection) {
    for (uint64_t a = 0; a <= full; ++a) {
      Rational va = oracle.ValuePacked(a);
      for (uint64_t b = a + 1; b <= full; ++b) {
        if ((a | b) == a || (a | b) == b) continue;  // comparable: trivial
        Rational lhs = va + oracle.ValuePacked(b);
        Rational rhs =
            oracle.ValuePacked(a | b) + oracle.ValuePacked(a & b);
        if (lhs < rhs) {
          // The two forms are equivalent, so a diminishing-returns witness
          // exists; produce the canonical one.
          return ValidateMultiSubmodular(
              oracle, MvCheckForm::kDiminishingReturns, cap);
        }
      }
    }
    return {true, std::nullopt};
  }

  // Diminishing-returns form over all tuples and assignment pairs.
  for (uint64_t m = 0; m <= full; ++m) {
    for (int e1 = 0; e1 < total; ++e1) {
      uint64_t b1 = uint64_t{1} << e1;
      if (m & b1) continue;
      Rational base = oracle.ValuePacked(m | b1) - oracle.ValuePacked(m);
      for (int e2 = 0; e2 < total; ++e2) {
        uint64_t b2 = uint64_t{1} << e2;
        if (e2 == e1 || (m & b2)) continue;
        Rational later =
            oracle.ValuePacked(m | b2 | b1) - oracle.ValuePacked(m | b2);
        if (base < later) {
          MultiSubmodularityWitness w;
          w.tuple = UnpackTuple(m, k, n);
          w.i = e1 / n;
          w.v = e1 % n;
          w.j = e2 / n;
          w.u = e2 % n;
          return {false, w};
        }
      }
    }
  }
  return {true, std::nullopt};
}

bool MultivariateMonotone(const MultivariateOracle& oracle, int cap) {
  int k = oracle.agents();
  int n = oracle.ground()->size();
  if (k * n > cap) {
    throw CapExceededError("multivariate monotonicity check: k*n exceeds cap");
  }
  int total = k * n;
  uint64_t full = total == 64 ? ~uint64_t{0} : ((uint64_t{1} << total) - 1);
  for (uint64_t m = 0; m <= full; ++m) {
    for (int e = 0; e < total; ++e) {
      uint64_t b = uint64_t{1} << e;
      if (m & b) continue;
      if (oracle.ValuePacked(m | b) < oracle.ValuePacked(m)) return false;
    }
  }
  return true;
}

}  // namespace masub
