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

#include "masub/maximize.h"

#include <algorithm>
#include <random>
#include <utility>

#include "masub/errors.h"

namespace masub {

bool IndependenceConstraint::Independent(uint64_t bits) const {
  for (const auto& m : matroids) {
    if (!m->Independent(bits)) return false;
  }
  return true;
}

GreedyTrace GreedyMax(const SubmodularOracle& f,
                      const IndependenceConstraint& c) {
  int n = f.ground()->size();
  GreedyTrace trace;
  trace.solution = 0;
  trace.value = f.Value(0);
  while (true) {
    int best = -1;
    Rational best_marginal;
    Rational current = f.Value(trace.solution);
    for (int v = 0; v < n; ++v) {
      uint64_t bit = uint64_t{1} << v;
      if (trace.solution & bit) continue;
      if (!c.Independent(trace.solution | bit)) continue;
      Rational marginal = f.Value(trace.solution | bit) - current;
      if (best < 0 || marginal > best_marginal) {
        best = v;  // ties: smallest index wins
        best_marginal = marginal;
      }
    }
    // Stop on a negative best marginal even for monotone-flagged oracles,
    // guarding against mis-flagged inputs.
    if (best < 0 || best_marginal < 0) break;
    trace.solution |= uint64_t{1} << best;
    trace.picks.push_back({best, best_marginal});
  }
  trace.value = f.Value(trace.solution);
  return trace;
}

uint64_t DoubleGreedy(const SubmodularOracle& f) {
  if (!f.flags().nonnegative) {
    throw PreconditionError("double greedy requires a nonnegative oracle");
  }
  int n = f.ground()->size();
  uint64_t low = 0;
  uint64_t high = f.ground()->full_mask();
  for (int v = 0; v < n; ++v) {
    uint64_t bit = uint64_t{1} << v;
    Rational gain_add = f.Value(low | bit) - f.Value(low);
    Rational gain_del = f.Value(high & ~bit) - f.Value(high);
    if (gain_add >= gain_del) {
      low |= bit;
    } else {
      high &= ~bit;
    }
  }
  return low;
}

uint64_t DoubleGreedyRandomized(const SubmodularOracle& f, uint64_t seed) {
  if (!f.flags().nonnegative) {
    throw PreconditionError("double greedy requires a nonnegative oracle");
  }
  std::mt19937_64 rng(seed);
  int n = f.ground()->size();
  uint64_t low = 0;
  uint64_t high = f.ground()->full_mask();
  for (int v = 0; v < n; ++v) {
    uint64_t bit = uint64_t{1} << v;
    Rational a = f.Value(low | bit) - f.Value(low);
    Rational b = f.Value(high & ~bit) - f.Value(high);
    Rational ap = a > 0 ? a : Rational(0);
    Rational bp = b > 0 ? b : Rational(0);
    bool add;
    if (ap + bp == 0) {
      add = true;
    } else {
      double threshold = ToDouble(ap / (ap + bp));
      add = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < threshold;
    }
    if (add) {
      low |= bit;
    } else {
      high &= ~bit;
    }
  }
  return low;
}

namespace {

// Greedy for a bases constraint: run greedy over the underlying matroid,
// then complete to a base by smallest index; for monotone f the completion
// never loses value.
GreedyTrace GreedyOverBases(const SubmodularOracle& f, const BasesFamily& b) {
  IndependenceConstraint c{{b.matroid()}};
  GreedyTrace trace = GreedyMax(f, c);
  int n = f.ground()->size();
  while (std::popcount(trace.solution) < b.rank()) {
    bool extended = false;
    for (int v = 0; v < n && !extended; ++v) {
      uint64_t bit = uint64_t{1} << v;
      if (trace.solution & bit) continue;
      if (b.matroid()->Independent(trace.solution | bit)) {
        Rational marginal =
            f.Value(trace.solution | bit) - f.Value(trace.solution);
        trace.solution |= bit;
        trace.picks.push_back({v, marginal});
        extended = true;
      }
    }
    if (!extended) break;  // matroid rank exhausted
  }
  trace.value = f.Value(trace.solution);
  return trace;
}

}  // namespace

MultiAgentSolution MaMaximize(MvOraclePtr g, const LiftInput& f,
                              const std::vector<MatroidPtr>& fs) {
  auto space = std::make_shared<LiftedGroundSet>(f.BaseGround(), g->agents());
  OraclePtr lifted_f = LiftOracle(*space, g);

  GreedyTrace trace;
  if (f.kind == LiftInput::Kind::kBases || f.kind == LiftInput::Kind::kFull) {
    LiftedFamily h = LiftFamilyH(f, g->agents());
    // Per-agent constraints still apply during completion only through
    // feasibility re-verification; greedy itself honours them below.
    if (!fs.empty()) {
      bool all_free =
          std::all_of(fs.begin(), fs.end(),
                      [](const MatroidPtr& m) { return m->kind() == "free"; });
      if (!all_free) {
        throw PreconditionError(
            "bases-constrained maximization supports only free per-agent "
            "families");
      }
    }
    trace = GreedyOverBases(*lifted_f, *h.bases);
  } else {
    MatroidIntersection constraint = LiftConstraint(f, fs, space);
    IndependenceConstraint c{constraint.parts};
    trace = GreedyMax(*lifted_f, c);
  }

  MultiAgentSolution sol;
  sol.trace = trace;
  sol.tuple = SetTuple(space->Unpack(trace.solution), space->base());
  sol.total = trace.value;

  // Feasibility re-verified directly on the tuple, never trusted from the
  // lifted search.
  bool ok = sol.tuple.PairwiseDisjoint();
  uint64_t cover = sol.tuple.UnionMask();
  switch (f.kind) {
    case LiftInput::Kind::kMatroid:
      ok = ok && f.matroid->Independent(cover);
      break;
    case LiftInput::Kind::kIntersection:
      ok = ok && f.intersection->Independent(cover);
      break;
    case LiftInput::Kind::kBases:
      ok = ok && f.bases->IsBase(cover);
      break;
    case LiftInput::Kind::kAll:
      break;
    case LiftInput::Kind::kFull:
      ok = ok && cover == f.BaseGround()->full_mask();
      break;
  }
  for (size_t i = 0; i < fs.size() && ok; ++i) {
    ok = fs[i]->Independent(sol.tuple.parts[i]);
  }
  sol.feasible = ok;
  return sol;
}

Rational RobustValue(const MultivariateOracle& g, const SetTuple& t, int tau,
                     long long enumeration_cap) {
  CheckDomain(t, *g.ground(), g.agents(), "robust_value");
  if (tau < 0) throw PreconditionError("tau must be >= 0");
  std::vector<std::pair<int, int>> elements;  // (agent, element)
  for (int i = 0; i < t.k(); ++i) {
    ForEachBit(t.parts[i], [&](int v) { elements.emplace_back(i, v); });
  }
  int total = static_cast<int>(elements.size());
  int budget = std::min(tau, total);
  // C(total, <= budget) removal patterns, capped.
  long long combos = 1, count = 1;
  for (int r = 1; r <= budget; ++r) {
    count = count * (total - r + 1) / r;
    combos += count;
    if (combos > enumeration_cap) {
      throw CapExceededError("robust_value: removal enumeration exceeds cap");
    }
  }

  Rational best = g.Value(t.parts);
  std::vector<int> chosen;
  std::vector<uint64_t> scratch = t.parts;
  std::function<void(int, int)> recurse = [&](int start, int remaining) {
    if (remaining == 0) return;
    for (int idx = start; idx < total; ++idx) {
      auto [agent, v] = elements[idx];
      scratch[agent] &= ~(uint64_t{1} << v);
      Rational val = g.Value(scratch);
      if (val < best) best = val;
      recurse(idx + 1, remaining - 1);
      scratch[agent] |= uint64_t{1} << v;
    }
  };
  recurse(0, budget);
  return best;
}

SaRobustSolver ExhaustiveRobustSolver(int cap_log2) {
  return [cap_log2](const SubmodularOracle& f,
                    const std::function<bool(uint64_t)>& feasible,
                    int tau) -> uint64_t {
    int n = f.ground()->size();
    if (n > cap_log2) {
      throw CapExceededError("exhaustive robust solver: 2^n exceeds cap");
    }
    uint64_t full = f.ground()->full_mask();
    bool found = false;
    uint64_t best_set = 0;
    Rational best_value;
    for (uint64_t s = 0;; ++s) {
      if (feasible(s)) {
        // Exact robust value of s: min over removals of size <= tau.
        Rational worst = f.Value(s);
        std::vector<int> elems = MaskToElements(s);
        std::function<void(size_t, int, uint64_t)> removals =
            [&](size_t start, int remaining, uint64_t current) {
              if (remaining == 0) return;
              for (size_t i = start; i < elems.size(); ++i) {
                uint64_t next = current & ~(uint64_t{1} << elems[i]);
                Rational val = f.Value(next);
                if (val < worst) worst = val;
                removals(i + 1, remaining - 1, next);
              }
            };
        removals(0, std::min<int>(tau, elems.size()), s);
        if (!found || worst > best_value) {
          found = true;
          best_set = s;
          best_value = worst;
        }
      }
      if (s == full) break;
    }
    if (!found) {
      throw InfeasibleError("robust maximization: empty feasible family");
    }
    return best_set;
  };
}

MultiAgentSolution RobustMaximize(MvOraclePtr g, const LiftInput& f,
                                  const std::vector<MatroidPtr>& fs, int tau,
                                  const SaRobustSolver& solver) {
  auto space = std::make_shared<LiftedGroundSet>(f.BaseGround(), g->agents());
  OraclePtr lifted_f = LiftOracle(*space, g);
  LiftedFamily h = LiftFamilyH(f, g->agents());
  std::function<bool(uint64_t)> feasible;
  if (fs.empty()) {
    feasible = h.member;
  } else {
    LiftedFamily hp = LiftFamilyHPrimeMatroids(fs, space);
    auto hm = h.member;
    auto hpm = hp.member;
    feasible = [hm, hpm](uint64_t bits) { return hm(bits) && hpm(bits); };
  }

  uint64_t chosen = solver(*lifted_f, feasible, tau);
  MultiAgentSolution sol;
  sol.tuple = SetTuple(space->Unpack(chosen), space->base());
  sol.feasible = feasible(chosen) && sol.tuple.PairwiseDisjoint();
  sol.total = RobustValue(*g, sol.tuple, tau);
  return sol;
}

}  // namespace masub
