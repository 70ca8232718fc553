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

#include "masub/minimize.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "masub/errors.h"
#include "masub/simplex.h"

namespace masub {

namespace {

// Exact covering-LP solve by column generation over an explicit blocker:
// the restricted master runs on the rational simplex and pricing is the
// dual separation of the extended formulation, an SFM of f_i minus the
// modular load induced by the duals. Terminates at the exact optimum since
// every round adds a column the master has priced negative.
struct ExactColumns {
  bool solved = false;
  std::vector<LpColumn> columns;
  Rational objective;
};

ExactColumns SolveByColumnGeneration(const std::vector<OraclePtr>& fs,
                                     const Clutter& blocker,
                                     const std::vector<LpColumn>& warm_start,
                                     int sfm_cap) {
  ExactColumns out;
  int n = blocker.ground()->size();
  int k = static_cast<int>(fs.size());
  if (n > sfm_cap) return out;
  const auto& members = blocker.members();
  if (members.empty()) {
    out.solved = true;
    out.objective = 0;
    return out;
  }

  std::vector<std::pair<uint64_t, int>> cols;  // (set, agent)
  auto add_column = [&cols](uint64_t set, int agent) {
    if (set == 0) return false;
    for (const auto& c : cols) {
      if (c.first == set && c.second == agent) return false;
    }
    cols.emplace_back(set, agent);
    return true;
  };
  for (int i = 0; i < k; ++i) {
    add_column(blocker.ground()->full_mask(), i);
  }
  for (const auto& c : warm_start) add_column(c.set, c.agent);

  for (int round = 0; round < 500; ++round) {
    std::vector<std::vector<Rational>> a(members.size(),
                                         std::vector<Rational>(cols.size()));
    std::vector<Rational> rhs(members.size(), Rational(1));
    std::vector<Rational> cost(cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
      cost[j] = fs[cols[j].second]->Value(cols[j].first);
      for (size_t b = 0; b < members.size(); ++b) {
        a[b][j] = std::popcount(cols[j].first & members[b]);
      }
    }
    LpResult master = SolveCoveringLp(a, rhs, cost);
    if (master.status != LpResult::Status::kOptimal) return out;

    // Price: per-element dual load, then one SFM per agent.
    std::vector<Rational> load(n, Rational(0));
    for (size_t b = 0; b < members.size(); ++b) {
      if (master.duals[b] == 0) continue;
      ForEachBit(members[b], [&](int v) { load[v] += master.duals[b]; });
    }
    bool improved = false;
    bool negative_priced = false;
    for (int i = 0; i < k; ++i) {
      const auto& f = fs[i];
      SubmodularOracle slack(
          blocker.ground(),
          [&f, &load](uint64_t bits) {
            Rational v = f->Value(bits);
            ForEachBit(bits, [&](int e) { v -= load[e]; });
            return v;
          },
          OracleFlags{}, "pricing");
      SfmResult priced = SfmBrute(slack, sfm_cap);
      if (priced.value < 0) {
        negative_priced = true;
        if (add_column(priced.minimizer, i)) improved = true;
      }
    }
    if (negative_priced && !improved) return out;  // inconsistent pricing
    if (!improved) {
      // Independent optimality certificate: the primal point is feasible by
      // construction; the duals must be nonnegative, dual-feasible for every
      // agent (checked by SFM, not by the simplex), and close the gap.
      Rational dual_total = 0;
      for (size_t b = 0; b < members.size(); ++b) {
        if (master.duals[b] < 0) return out;
        dual_total += master.duals[b];
        Rational coverage = 0;
        for (size_t j = 0; j < cols.size(); ++j) {
          if (master.x[j] > 0) {
            coverage +=
                master.x[j] * std::popcount(cols[j].first & members[b]);
          }
        }
        if (coverage < 1) return out;
      }
      if (dual_total != master.objective) return out;
      for (int i = 0; i < k; ++i) {
        DualFeasibility dual =
            DualFeasible(*fs[i], master.duals, blocker, sfm_cap);
        if (!dual.feasible) return out;
      }
      out.solved = true;
      out.objective = master.objective;
      for (size_t j = 0; j < cols.size(); ++j) {
        if (master.x[j] > 0) {
          out.columns.push_back({cols[j].first, cols[j].second, master.x[j]});
        }
      }
      return out;
    }
  }
  return out;
}

// Greedy vertex of the base polytope maximizing q . z (descending z order);
// this is a subgradient of f^L at z.
std::vector<double> LovaszSubgradient(const SubmodularOracle& f,
                                      const std::vector<double>& z) {
  int n = static_cast<int>(z.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return z[a] > z[b]; });
  std::vector<double> q(n);
  uint64_t prefix = 0;
  Rational prev = f.Value(0);
  for (int idx : order) {
    prefix |= uint64_t{1} << idx;
    Rational cur = f.Value(prefix);
    q[idx] = ToDouble(cur - prev);
    prev = cur;
  }
  return q;
}

std::vector<Rational> ToExactClamped(const std::vector<double>& z) {
  std::vector<Rational> out(z.size());
  for (size_t i = 0; i < z.size(); ++i) {
    double v = std::min(1.0, std::max(0.0, z[i]));
    out[i] = FromDouble(v);
  }
  return out;
}

struct RepairedPoint {
  std::vector<std::vector<Rational>> z_agents;
  std::vector<Rational> zsum;
  Rational objective;
  bool ok = false;
};

// Exact feasibility repair: scale every agent block by the worst blocker
// deficit and clamp at 1 (clamping preserves z(B) >= 1), then price the
// point by exact level-set decompositions.
RepairedPoint RepairAndPrice(const std::vector<OraclePtr>& fs,
                             const BlockingFamily& p,
                             std::vector<std::vector<Rational>> z_agents) {
  int n = p.ground()->size();
  int k = static_cast<int>(z_agents.size());
  RepairedPoint out;
  std::vector<Rational> zsum(n, Rational(0));
  for (int i = 0; i < k; ++i) {
    for (int v = 0; v < n; ++v) zsum[v] += z_agents[i][v];
  }
  SeparationResult sep = p.MinBlockerValue(zsum);
  if (sep.min_value && *sep.min_value < 1) {
    if (*sep.min_value == 0) return out;  // unrepairable by scaling
    Rational scale = 1 / *sep.min_value;
    for (int i = 0; i < k; ++i) {
      for (int v = 0; v < n; ++v) {
        z_agents[i][v] *= scale;
        if (z_agents[i][v] > 1) z_agents[i][v] = 1;
      }
    }
    for (int v = 0; v < n; ++v) {
      zsum[v] = 0;
      for (int i = 0; i < k; ++i) zsum[v] += z_agents[i][v];
    }
  }
  out.objective = 0;
  for (int i = 0; i < k; ++i) {
    out.objective += Lovasz(*fs[i], z_agents[i]).value;
  }
  out.z_agents = std::move(z_agents);
  out.zsum = std::move(zsum);
  out.ok = true;
  return out;
}

}  // namespace

CoveringLpSolution SolveMaLp(std::vector<OraclePtr> fs,
                             std::shared_ptr<const BlockingFamily> p,
                             const SubgradientOptions& options) {
  if (fs.empty()) throw PreconditionError("solve_ma_lp needs k >= 1 oracles");
  for (const auto& f : fs) {
    if (!f->ground()->SameAs(*p->ground())) {
      throw DomainMismatchError("LP oracle on a different ground set");
    }
    if (!f->flags().monotone || !f->flags().nonnegative ||
        !f->flags().normalized) {
      throw PreconditionError(
          "covering LP requires monotone nonnegative normalized oracles");
    }
  }
  int n = p->ground()->size();
  int k = static_cast<int>(fs.size());

  // Penalty weight dominating any dual multiplier of the covering LP.
  Rational value_scale = 0;
  for (const auto& f : fs) value_scale += f->Value(f->ground()->full_mask());
  double lambda = 2.0 * (ToDouble(value_scale) + 1.0);

  std::vector<std::vector<double>> z(k, std::vector<double>(n, 1.0 / k));

  // Feasible seed: the cheapest single agent taking everything.
  RepairedPoint best;
  {
    int cheapest = 0;
    for (int i = 1; i < k; ++i) {
      if (fs[i]->Value(fs[i]->ground()->full_mask()) <
          fs[cheapest]->Value(fs[cheapest]->ground()->full_mask())) {
        cheapest = i;
      }
    }
    std::vector<std::vector<Rational>> seed(
        k, std::vector<Rational>(n, Rational(0)));
    for (int v = 0; v < n; ++v) seed[cheapest][v] = 1;
    best = RepairAndPrice(fs, *p, std::move(seed));
  }

  // With an explicit blocker at desk scale, an exact column-generation
  // finisher runs after the subgradient pass; the pass then only needs to
  // provide a warm start and a fallback.
  bool exact_finish = p->explicit_blocker().has_value() && n <= 16;
  int cap = std::max(200, options.iteration_factor * n * n);
  if (exact_finish) cap = std::min(cap, std::max(200, 5 * n * n));
  int check_every = std::max(10, cap / 50);
  double step_scale = 0;
  Rational last_violation = 0;

  const std::optional<Clutter>& explicit_blocker = p->explicit_blocker();

  for (int t = 1; t <= cap; ++t) {
    // Subgradient of sum_i f_i^L plus the separation-driven penalty.
    std::vector<std::vector<double>> grad(k);
    for (int i = 0; i < k; ++i) grad[i] = LovaszSubgradient(*fs[i], z[i]);

    // The penalty needs only a most-violated blocker; for explicit blockers
    // a floating-point scan suffices, oracle sources run exactly.
    std::optional<uint64_t> violated;
    double violation = 0;
    if (explicit_blocker) {
      std::vector<double> zsum(n, 0.0);
      for (int i = 0; i < k; ++i) {
        for (int v = 0; v < n; ++v) zsum[v] += z[i][v];
      }
      double min_value = 2.0;
      for (uint64_t b : explicit_blocker->members()) {
        double sum = 0;
        ForEachBit(b, [&](int v) { sum += zsum[v]; });
        if (sum < min_value) {
          min_value = sum;
          if (sum < 1) violated = b;
        }
      }
      if (violated) violation = 1 - min_value;
    } else {
      std::vector<Rational> zsum_exact(n, Rational(0));
      for (int i = 0; i < k; ++i) {
        for (int v = 0; v < n; ++v) {
          zsum_exact[v] += FromDouble(std::min(1.0, std::max(0.0, z[i][v])));
        }
      }
      SeparationResult sep = p->MinBlockerValue(zsum_exact);
      if (sep.min_value && *sep.min_value < 1 && sep.blocker) {
        violated = *sep.blocker;
        violation = ToDouble(1 - *sep.min_value);
      }
    }
    if (violated) {
      ForEachBit(*violated, [&](int v) {
        for (int i = 0; i < k; ++i) grad[i][v] -= lambda;
      });
    }
    last_violation = FromDouble(violation);

    if (t == 1) {
      double norm = 0;
      for (int i = 0; i < k; ++i) {
        for (double g : grad[i]) norm += g * g;
      }
      step_scale = std::sqrt(static_cast<double>(k) * n) /
                   std::max(1.0, std::sqrt(norm));
    }
    double step = step_scale / std::sqrt(static_cast<double>(t));
    for (int i = 0; i < k; ++i) {
      for (int v = 0; v < n; ++v) {
        z[i][v] = std::min(1.0, std::max(0.0, z[i][v] - step * grad[i][v]));
      }
    }

    if (t % check_every == 0 || t == cap) {
      std::vector<std::vector<Rational>> snapshot(k);
      for (int i = 0; i < k; ++i) snapshot[i] = ToExactClamped(z[i]);
      RepairedPoint candidate = RepairAndPrice(fs, *p, std::move(snapshot));
      if (candidate.ok &&
          (!best.ok || candidate.objective < best.objective)) {
        best = std::move(candidate);
      }
    }
  }
  if (!best.ok) {
    throw SolverError("covering LP: no feasible point was reachable");
  }

  CoveringLpSolution sol;
  sol.iterations = cap;
  sol.final_violation = last_violation;
  // The returned point is always exactly feasible (post-repair); the flag
  // records whether the raw iterate still carried a violation at the cap.
  sol.converged = last_violation == 0;
  sol.objective = best.objective;
  sol.z.ground = p->ground();
  sol.z.z = best.zsum;
  for (int i = 0; i < k; ++i) {
    FractionalPoint zi;
    zi.ground = p->ground();
    zi.z = best.z_agents[i];
    sol.z_agents.push_back(std::move(zi));
    for (const auto& [set, weight] :
         LevelSetDecomposition(*fs[i], best.z_agents[i])) {
      sol.columns.push_back({set, i, weight});
    }
  }

  if (exact_finish) {
    ExactColumns exact = SolveByColumnGeneration(
        fs, *p->explicit_blocker(), sol.columns, /*sfm_cap=*/20);
    if (exact.solved && exact.objective <= sol.objective) {
      sol.objective = exact.objective;
      sol.columns = exact.columns;
      std::vector<std::vector<Rational>> z_agents(
          k, std::vector<Rational>(n, Rational(0)));
      for (const auto& col : sol.columns) {
        ForEachBit(col.set,
                   [&](int v) { z_agents[col.agent][v] += col.weight; });
      }
      sol.z.z.assign(n, Rational(0));
      for (int i = 0; i < k; ++i) {
        sol.z_agents[i].z = z_agents[i];
        for (int v = 0; v < n; ++v) sol.z.z[v] += z_agents[i][v];
      }
      sol.final_violation = 0;
      sol.converged = true;
    }
  }
  return sol;
}

CoveringLpSolution SolveSaLp(OraclePtr f,
                             std::shared_ptr<const BlockingFamily> p,
                             const SubgradientOptions& options) {
  return SolveMaLp({std::move(f)}, std::move(p), options);
}

Rational LpExactOracle(const SubmodularOracle& f, const Clutter& blocker,
                       bool modular_hint) {
  int n = f.ground()->size();
  bool modular = modular_hint;
  if (!modular && n <= 10) {
    modular = true;
    uint64_t full = f.ground()->full_mask();
    for (uint64_t s = 0; s <= full && modular; ++s) {
      Rational sum = 0;
      ForEachBit(s, [&](int v) { sum += f.Value(uint64_t{1} << v); });
      if (f.Value(s) != sum) modular = false;
      if (s == full) break;
    }
  }
  int cap = modular ? 6 : 5;
  if (n > cap) {
    throw CapExceededError("lp_exact_oracle: n=" + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
  }
  if (blocker.members().empty()) return 0;

  // Column LP over all nonempty subsets: min sum f(S) x(S) subject to
  // sum_S |S cap B| x(S) >= 1 per blocker member.
  int cols = (1 << n) - 1;
  std::vector<std::vector<Rational>> a;
  for (uint64_t b : blocker.members()) {
    std::vector<Rational> row(cols);
    for (int s = 1; s <= cols; ++s) {
      row[s - 1] = std::popcount(static_cast<uint64_t>(s) & b);
    }
    a.push_back(std::move(row));
  }
  std::vector<Rational> rhs(blocker.members().size(), Rational(1));
  std::vector<Rational> cost(cols);
  for (int s = 1; s <= cols; ++s) cost[s - 1] = f.Value(s);
  LpResult lp = SolveCoveringLp(a, rhs, cost);
  if (lp.status != LpResult::Status::kOptimal) {
    throw InfeasibleError("lp_exact_oracle: covering LP infeasible");
  }
  return lp.objective;
}

uint64_t BoundedBlockerRound(const CoveringLpSolution& sol,
                             const BlockingFamily& p) {
  if (!p.beta_bound()) {
    throw PreconditionError("bounded_blocker_round needs a beta bound");
  }
  Rational threshold = Rational(1, *p.beta_bound());
  uint64_t q = 0;
  for (size_t v = 0; v < sol.z.z.size(); ++v) {
    if (sol.z.z[v] >= threshold) q |= uint64_t{1} << v;
  }
  if (!p.UpwardMember(q)) {
    throw InfeasibleError(
        "bounded_blocker_round produced an infeasible set; the LP point "
        "must not have been feasible");
  }
  return q;
}

namespace {

struct CoverPick {
  uint64_t set = 0;
  int agent = 0;
  Rational cost;
  uint64_t newly = 0;
};

// Greedy weighted set cover of `target` from (set, agent, cost) candidates;
// ratio ties broken by (agent, set mask).
std::vector<CoverPick> GreedyCover(
    uint64_t target, const std::vector<CoverPick>& candidates) {
  std::vector<CoverPick> picks;
  uint64_t uncovered = target;
  while (uncovered) {
    int best = -1;
    Rational best_num, best_den;
    for (size_t c = 0; c < candidates.size(); ++c) {
      uint64_t gain = candidates[c].set & uncovered;
      if (!gain) continue;
      Rational num = candidates[c].cost;
      Rational den = std::popcount(gain);
      if (best < 0 || num * best_den < best_num * den) {
        best = static_cast<int>(c);
        best_num = num;
        best_den = den;
      }
    }
    if (best < 0) {
      throw InfeasibleError("greedy cover: support fails to cover the target");
    }
    CoverPick pick = candidates[best];
    pick.newly = pick.set & uncovered;
    uncovered &= ~pick.set;
    picks.push_back(pick);
  }
  return picks;
}

}  // namespace

MultiAgentSolution MaBoundedBlockerRound(const CoveringLpSolution& sol,
                                         const BlockingFamily& p,
                                         const std::vector<OraclePtr>& fs) {
  if (!p.beta_bound()) {
    throw PreconditionError("ma_bounded_blocker_round needs a beta bound");
  }
  int k = static_cast<int>(fs.size());
  int n = p.ground()->size();
  Rational threshold = Rational(1, *p.beta_bound());
  uint64_t q = 0;
  for (int v = 0; v < n; ++v) {
    if (sol.z.z[v] >= threshold) q |= uint64_t{1} << v;
  }

  std::vector<CoverPick> candidates;
  for (const auto& col : sol.columns) {
    if (col.weight <= 0) continue;
    candidates.push_back(
        {col.set, col.agent, fs[col.agent]->Value(col.set), 0});
  }
  std::vector<CoverPick> picks = q ? GreedyCover(q, candidates)
                                   : std::vector<CoverPick>{};

  // Merge per agent, then strip duplicated elements from all but the
  // lowest-index owning agent, ascending element order.
  std::vector<uint64_t> merged(k, 0);
  for (const auto& pick : picks) merged[pick.agent] |= pick.set;
  uint64_t taken = 0;
  for (int i = 0; i < k; ++i) {
    merged[i] &= ~taken;
    taken |= merged[i];
  }

  MultiAgentSolution out;
  out.tuple = SetTuple(merged, p.ground());
  out.total = 0;
  for (int i = 0; i < k; ++i) {
    out.per_agent_cost.push_back(fs[i]->Value(merged[i]));
    out.total += out.per_agent_cost.back();
  }
  out.feasible = out.tuple.PairwiseDisjoint() &&
                 p.UpwardMember(out.tuple.UnionMask());
  return out;
}

SaRounder BoundedBlockerRounder() {
  return [](OraclePtr, const BlockingFamily& p,
            const CoveringLpSolution& sol) {
    return BoundedBlockerRound(sol, p);
  };
}

namespace {

struct WeightedColumn {
  uint64_t set;
  int agent;
  Rational weight;
};

Rational ColumnCost(const std::vector<WeightedColumn>& cols,
                    const std::vector<OraclePtr>& fs) {
  Rational total = 0;
  for (const auto& c : cols) total += c.weight * fs[c.agent]->Value(c.set);
  return total;
}

std::vector<Rational> ColumnImage(const std::vector<WeightedColumn>& cols,
                                  int n) {
  std::vector<Rational> z(n, Rational(0));
  for (const auto& c : cols) {
    ForEachBit(c.set, [&](int v) { z[v] += c.weight; });
  }
  return z;
}

void MergeDuplicateColumns(std::vector<WeightedColumn>& cols) {
  std::map<std::pair<uint64_t, int>, Rational> merged;
  for (const auto& c : cols) {
    if (c.set == 0 || c.weight == 0) continue;
    merged[{c.set, c.agent}] += c.weight;
  }
  cols.clear();
  for (const auto& [key, w] : merged) cols.push_back({key.first, key.second, w});
}

}  // namespace

FractureResult FractureExpandReturn(const std::vector<OraclePtr>& fs,
                                    std::shared_ptr<const BlockingFamily> p,
                                    const SaRounder& rounder,
                                    const SubgradientOptions& options) {
  int n = p->ground()->size();
  int k = static_cast<int>(fs.size());
  FractureResult out;

  // Stage 1: the multi-agent LP.
  CoveringLpSolution lp = SolveMaLp(fs, p, options);
  out.trace.lp_objective = lp.objective;
  out.trace.stages.push_back({"ma-lp", lp.objective});

  std::vector<WeightedColumn> cols;
  for (const auto& c : lp.columns) cols.push_back({c.set, c.agent, c.weight});

  // Stage 2: drop small elements (z(v) <= 1/(2n)) and double the columns.
  Rational small_threshold(1, 2 * n);
  uint64_t small = 0;
  for (int v = 0; v < n; ++v) {
    if (lp.z.z[v] <= small_threshold) small |= uint64_t{1} << v;
  }
  for (auto& c : cols) {
    c.set &= ~small;
    c.weight *= 2;
  }
  MergeDuplicateColumns(cols);
  {
    std::vector<Rational> z2 = ColumnImage(cols, n);
    SeparationResult sep = p->MinBlockerValue(z2);
    if (sep.min_value && *sep.min_value < 1) {
      throw SolverError("fracture stage drop-and-double lost feasibility");
    }
  }
  out.trace.stages.push_back({"drop-double", ColumnCost(cols, fs)});

  // Stage 3: round z up to powers of two. Bin Z_j holds the elements with
  // z(v) in (2^-(j+1), 2^-j]; z(v) = 1 (or above, from doubling) lands in
  // bin 0. Implemented as a blanket doubling followed by exact truncation of
  // the surplus coverage, element by element.
  std::vector<Rational> z2 = ColumnImage(cols, n);
  int max_bins = 1;
  while ((uint64_t{1} << max_bins) < uint64_t{2} * n) ++max_bins;
  ++max_bins;  // j ranges 0..ceil(log2(2n))
  std::vector<int> bin_of(n, -1);
  std::vector<Rational> target(n, Rational(0));
  for (int v = 0; v < n; ++v) {
    if (z2[v] == 0) continue;
    int j = 0;
    while (j + 1 < max_bins && z2[v] <= Rational(1, uint64_t{1} << (j + 1))) {
      ++j;
    }
    bin_of[v] = j;
    target[v] = Rational(1, uint64_t{1} << j);
  }
  for (auto& c : cols) c.weight *= 2;
  for (int v = 0; v < n; ++v) {
    if (bin_of[v] < 0) continue;
    Rational excess = 2 * z2[v] - target[v];
    if (excess < 0) {
      throw SolverError("fracture bin round-up computed a negative surplus");
    }
    std::vector<WeightedColumn> extra;
    for (auto& c : cols) {
      if (excess == 0) break;
      if (!MaskContains(c.set, v) || c.weight == 0) continue;
      Rational take = std::min(c.weight, excess);
      c.weight -= take;
      excess -= take;
      extra.push_back({c.set & ~(uint64_t{1} << v), c.agent, take});
    }
    if (excess > 0) {
      throw SolverError("fracture bin round-up could not match the target");
    }
    cols.insert(cols.end(), extra.begin(), extra.end());
    MergeDuplicateColumns(cols);
  }
  out.trace.stages.push_back({"bin-round-up", ColumnCost(cols, fs)});

  // Stage 4: fracture every column along the bins.
  std::vector<uint64_t> bins(max_bins, 0);
  for (int v = 0; v < n; ++v) {
    if (bin_of[v] >= 0) bins[bin_of[v]] |= uint64_t{1} << v;
  }
  for (uint64_t b : bins) {
    if (b) ++out.trace.nonempty_bins;
  }
  std::vector<WeightedColumn> fractured;
  for (const auto& c : cols) {
    for (int j = 0; j < max_bins; ++j) {
      uint64_t piece = c.set & bins[j];
      if (piece) fractured.push_back({piece, c.agent, c.weight});
    }
  }
  MergeDuplicateColumns(fractured);
  out.trace.stages.push_back({"fracture", ColumnCost(fractured, fs)});

  // Stage 5+6: expand each bin by r_j = 2^j, greedily cover it with
  // truncated disjoint pieces, and return weights 1/r_j.
  struct Piece {
    uint64_t set;
    int agent;
    Rational cost;
    int bin;
  };
  std::vector<Piece> pieces;
  Rational return_cost = 0;
  for (int j = 0; j < max_bins; ++j) {
    if (!bins[j]) continue;
    std::vector<CoverPick> candidates;
    for (const auto& c : fractured) {
      if ((c.set & bins[j]) != c.set || c.set == 0) continue;
      candidates.push_back({c.set, c.agent, fs[c.agent]->Value(c.set), 0});
    }
    std::vector<CoverPick> picks = GreedyCover(bins[j], candidates);
    Rational rj_inverse(1, uint64_t{1} << j);
    for (const auto& pick : picks) {
      Piece piece{pick.newly, pick.agent, fs[pick.agent]->Value(pick.newly),
                  j};
      return_cost += rj_inverse * piece.cost;
      pieces.push_back(piece);
    }
  }
  out.trace.stages.push_back({"greedy-cover-return", return_cost});

  // Stage 7: single-agent rounding of the induced piece-counting function.
  auto piece_data = std::make_shared<std::vector<std::pair<uint64_t, Rational>>>();
  for (const auto& piece : pieces) {
    piece_data->emplace_back(piece.set, piece.cost);
  }
  OracleFlags gflags;
  gflags.monotone = gflags.nonnegative = gflags.normalized = true;
  auto induced = std::make_shared<SubmodularOracle>(
      p->ground(),
      [piece_data](uint64_t bits) {
        Rational sum = 0;
        for (const auto& [set, cost] : *piece_data) {
          if (set & bits) sum += cost;
        }
        return sum;
      },
      gflags, "induced-cover");

  CoveringLpSolution induced_sol;
  induced_sol.z.ground = p->ground();
  induced_sol.z.z.assign(n, Rational(0));
  induced_sol.objective = return_cost;
  for (const auto& piece : pieces) {
    Rational w(1, uint64_t{1} << piece.bin);
    induced_sol.columns.push_back({piece.set, 0, w});
    ForEachBit(piece.set, [&](int v) { induced_sol.z.z[v] = w; });
  }
  for (int i = 0; i < k; ++i) {
    induced_sol.z_agents.push_back(induced_sol.z);
  }

  uint64_t chosen = rounder(induced, *p, induced_sol);

  std::vector<uint64_t> merged(k, 0);
  uint64_t in_pieces = 0;
  for (const auto& piece : pieces) {
    in_pieces |= piece.set;
    if (piece.set & chosen) merged[piece.agent] |= piece.set;
  }
  // Elements chosen by the rounder outside every piece (possible only with
  // custom rounders) go to agent 0 to keep the union feasible.
  merged[0] |= chosen & ~in_pieces;

  MultiAgentSolution sol;
  sol.tuple = SetTuple(merged, p->ground());
  sol.total = 0;
  for (int i = 0; i < k; ++i) {
    sol.per_agent_cost.push_back(fs[i]->Value(merged[i]));
    sol.total += sol.per_agent_cost.back();
  }
  sol.feasible = sol.tuple.PairwiseDisjoint() &&
                 p->UpwardMember(sol.tuple.UnionMask());
  if (!sol.feasible) {
    throw SolverError("fracture rounding produced an infeasible solution");
  }
  out.trace.stages.push_back({"sa-round", sol.total});
  out.trace.factor_product = lp.objective > 0
                                 ? sol.total / lp.objective
                                 : Rational(sol.total == 0 ? 0 : 1);
  out.solution = std::move(sol);
  return out;
}

SaMinSolver ExactSaMinSolver(int cap) {
  return [cap](OraclePtr f, const BlockingFamily& p) -> uint64_t {
    int n = f->ground()->size();
    if (n > cap) {
      throw CapExceededError("exact SA solver: n exceeds cap");
    }
    uint64_t full = f->ground()->full_mask();
    bool found = false;
    uint64_t best_set = 0;
    Rational best_value;
    for (uint64_t s = 0;; ++s) {
      if (p.UpwardMember(s)) {
        Rational v = f->Value(s);
        if (!found || v < best_value) {
          found = true;
          best_set = s;
          best_value = v;
        }
      }
      if (s == full) break;
    }
    if (!found) throw InfeasibleError("exact SA solver: empty family");
    return best_set;
  };
}

MultiAgentSolution MvReduceKAlpha(MvOraclePtr g,
                                  std::shared_ptr<const BlockingFamily> p,
                                  const SaMinSolver& solver,
                                  const SubgradientOptions& options) {
  int k = g->agents();
  int n = g->ground()->size();
  if (!g->ground()->SameAs(*p->ground())) {
    throw DomainMismatchError("mv_reduce: family on a different ground set");
  }
  auto space = std::make_shared<LiftedGroundSet>(g->ground(), k);
  OraclePtr lifted = LiftOracle(*space, g);
  auto lifted_family =
      std::make_shared<BlockingFamily>(LiftSeparation(p, k));

  CoveringLpSolution relaxed = SolveSaLp(lifted, lifted_family, options);

  // Per element, the incident edge carrying the largest chain mass; ties go
  // to the lowest agent index.
  std::vector<int> star_agent(n, 0);
  for (int v = 0; v < n; ++v) {
    Rational best = relaxed.z.z[space->Index(0, v)];
    for (int i = 1; i < k; ++i) {
      const Rational& w = relaxed.z.z[space->Index(i, v)];
      if (w > best) {
        best = w;
        star_agent[v] = i;
      }
    }
  }

  // f'(S) = f(pi(S)) with pi(v) the chosen edge; nonnegative monotone
  // submodular as a restriction of the lifted oracle.
  auto agents = std::make_shared<std::vector<int>>(star_agent);
  auto spc = space;
  auto induced = std::make_shared<SubmodularOracle>(
      g->ground(),
      [lifted, agents, spc](uint64_t bits) {
        uint64_t mapped = 0;
        ForEachBit(bits, [&](int v) {
          mapped |= uint64_t{1} << spc->Index((*agents)[v], v);
        });
        return lifted->Value(mapped);
      },
      g->flags(), "k-alpha-induced");

  uint64_t chosen = solver(induced, *p);

  std::vector<uint64_t> parts(k, 0);
  ForEachBit(chosen, [&](int v) {
    parts[star_agent[v]] |= uint64_t{1} << v;
  });
  MultiAgentSolution sol;
  sol.tuple = SetTuple(parts, g->ground());
  sol.total = induced->Value(chosen);
  sol.feasible =
      sol.tuple.PairwiseDisjoint() && p->UpwardMember(sol.tuple.UnionMask());
  return sol;
}

namespace {

struct RatioPiece {
  bool found = false;
  uint64_t set = 0;       // subset of the agent's region
  Rational ratio;         // f_i(set) / |set cap uncovered|
};

// Min-ratio piece for one agent: binary search on theta with exact SFM
// subproblems over the agent's region; the bracketing minimizers are
// re-evaluated exactly.
RatioPiece MinRatioPiece(const SubmodularOracle& f, uint64_t region,
                         uint64_t uncovered) {
  RatioPiece out;
  uint64_t usable = region & uncovered;
  if (!usable) return out;

  std::vector<int> elems = MaskToElements(region);
  int m = static_cast<int>(elems.size());
  GroundSetPtr local = GroundSet::Indexed(m, "r");
  auto to_global = [&elems](uint64_t local_bits) {
    uint64_t g = 0;
    ForEachBit(local_bits, [&](int j) { g |= uint64_t{1} << elems[j]; });
    return g;
  };
  uint64_t local_uncovered = 0;
  for (int j = 0; j < m; ++j) {
    if (MaskContains(uncovered, elems[j])) local_uncovered |= uint64_t{1} << j;
  }

  auto exact_ratio = [&](uint64_t local_bits) {
    int gain = std::popcount(local_bits & local_uncovered);
    return f.Value(to_global(local_bits)) / gain;
  };

  // Initial bracket: cheapest useful singleton.
  Rational hi;
  uint64_t hi_set = 0;
  bool first = true;
  ForEachBit(local_uncovered, [&](int j) {
    Rational r = f.Value(to_global(uint64_t{1} << j));
    if (first || r < hi) {
      hi = r;
      hi_set = uint64_t{1} << j;
      first = false;
    }
  });
  Rational lo = 0;

  for (int iter = 0; iter < 64 && lo < hi; ++iter) {
    Rational mid = (lo + hi) / 2;
    SubmodularOracle h(
        local,
        [&f, &to_global, local_uncovered, mid](uint64_t bits) {
          return f.Value(to_global(bits)) -
                 mid * std::popcount(bits & local_uncovered);
        },
        OracleFlags{}, "ratio-slack");
    SfmResult min = SfmBrute(h, 20);
    if (min.value < 0) {
      // The minimizer touches uncovered elements (otherwise its value would
      // be nonnegative); its exact ratio tightens the upper bracket.
      Rational r = exact_ratio(min.minimizer);
      if (r < hi) {
        hi = r;
        hi_set = min.minimizer;
      } else {
        break;  // bracket cannot tighten further
      }
    } else {
      lo = mid;
    }
  }
  out.found = true;
  out.set = to_global(hi_set);
  out.ratio = hi;
  return out;
}

}  // namespace

MultiAgentSolution MscaGreedy(const std::vector<OraclePtr>& fs,
                              const std::vector<uint64_t>& regions) {
  if (fs.size() != regions.size() || fs.empty()) {
    throw PreconditionError("msca_greedy needs one region per agent");
  }
  const GroundSetPtr& ground = fs.front()->ground();
  int k = static_cast<int>(fs.size());
  uint64_t covered_by_regions = 0;
  for (uint64_t r : regions) covered_by_regions |= r;
  if (covered_by_regions != ground->full_mask()) {
    throw InfeasibleError("msca_greedy: some element lies in no region");
  }
  for (const auto& f : fs) {
    if (!f->flags().monotone || !f->flags().nonnegative ||
        !f->flags().normalized) {
      throw PreconditionError(
          "msca_greedy requires monotone nonnegative normalized oracles");
    }
  }

  uint64_t uncovered = ground->full_mask();
  std::vector<uint64_t> assigned(k, 0);
  while (uncovered) {
    int best_agent = -1;
    RatioPiece best;
    for (int i = 0; i < k; ++i) {
      RatioPiece piece = MinRatioPiece(*fs[i], regions[i], uncovered);
      if (!piece.found) continue;
      if (best_agent < 0 || piece.ratio < best.ratio) {
        best_agent = i;
        best = piece;
      }
    }
    if (best_agent < 0) {
      throw InfeasibleError("msca_greedy: uncoverable residue");
    }
    uint64_t gain = best.set & uncovered;
    assigned[best_agent] |= gain;
    uncovered &= ~gain;
  }

  MultiAgentSolution sol;
  sol.tuple = SetTuple(assigned, ground);
  sol.total = 0;
  for (int i = 0; i < k; ++i) {
    sol.per_agent_cost.push_back(fs[i]->Value(assigned[i]));
    sol.total += sol.per_agent_cost.back();
  }
  sol.feasible = sol.tuple.PairwiseDisjoint() &&
                 sol.tuple.UnionMask() == ground->full_mask();
  return sol;
}

MultiAgentSolution MscaBMatching(const std::vector<OraclePtr>& fs,
                                 const std::vector<uint64_t>& regions,
                                 const std::vector<int>& caps) {
  if (fs.size() != regions.size() || fs.size() != caps.size() || fs.empty()) {
    throw PreconditionError(
        "msca_bmatching needs one region and one cap per agent");
  }
  const GroundSetPtr& ground = fs.front()->ground();
  int k = static_cast<int>(fs.size());
  int n = ground->size();
  for (int c : caps) {
    if (c < 0) throw PreconditionError("caps must be >= 0");
  }

  // Nodes: 0 source, 1..k agents, k+1..k+n elements, k+n+1 sink.
  int source = 0, sink = k + n + 1;
  std::vector<McfArc> arcs;
  for (int i = 0; i < k; ++i) {
    arcs.push_back({source, 1 + i, caps[i], Rational(0)});
  }
  std::vector<std::vector<int>> edge_arc(k, std::vector<int>(n, -1));
  for (int i = 0; i < k; ++i) {
    ForEachBit(regions[i], [&](int v) {
      edge_arc[i][v] = static_cast<int>(arcs.size());
      arcs.push_back({1 + i, 1 + k + v, 1,
                      fs[i]->Value(uint64_t{1} << v)});
    });
  }
  for (int v = 0; v < n; ++v) {
    arcs.push_back({1 + k + v, sink, 1, Rational(0)});
  }

  McfResult flow = MinCostFlow(k + n + 2, arcs, source, sink, n);
  if (flow.flow < n) {
    // Report the deficient elements (those Hall's condition starves).
    uint64_t unmatched = 0;
    for (int v = 0; v < n; ++v) {
      bool matched = false;
      for (int i = 0; i < k && !matched; ++i) {
        int a = edge_arc[i][v];
        if (a >= 0 && flow.arc_flow[a] > 0) matched = true;
      }
      if (!matched) unmatched |= uint64_t{1} << v;
    }
    throw InfeasibleError("no saturating b-matching; deficient elements " +
                          MaskToString(unmatched, *ground));
  }

  std::vector<uint64_t> parts(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int v = 0; v < n; ++v) {
      int a = edge_arc[i][v];
      if (a >= 0 && flow.arc_flow[a] > 0) parts[i] |= uint64_t{1} << v;
    }
  }
  MultiAgentSolution sol;
  sol.tuple = SetTuple(parts, ground);
  sol.total = 0;
  for (int i = 0; i < k; ++i) {
    sol.per_agent_cost.push_back(fs[i]->Value(parts[i]));
    sol.total += sol.per_agent_cost.back();
  }
  sol.feasible = sol.tuple.PairwiseDisjoint() &&
                 sol.tuple.UnionMask() == ground->full_mask();
  return sol;
}

}  // namespace masub
