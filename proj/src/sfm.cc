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

#include "masub/sfm.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "masub/errors.h"

namespace masub {

LovaszEvaluation Lovasz(const SubmodularOracle& f,
                        const std::vector<Rational>& z) {
  int n = f.ground()->size();
  if (static_cast<int>(z.size()) != n) {
    throw DomainMismatchError("lovasz: point has the wrong dimension");
  }
  for (const Rational& v : z) {
    if (v < 0 || v > 1) {
      throw PreconditionError("lovasz: entries must lie in [0,1]");
    }
  }
  // Distinct positive values v_1 < ... < v_m, with v_0 = 0 and v_{m+1} = 1;
  // equal entries share a level and are never reordered.
  std::vector<Rational> values;
  for (const Rational& v : z) {
    if (v > 0) values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  LovaszEvaluation out;
  out.value = 0;
  Rational prev = 0;
  for (size_t i = 0; i <= values.size(); ++i) {
    Rational threshold = prev;  // v_i
    Rational next = i < values.size() ? values[i] : Rational(1);
    uint64_t level = 0;
    for (int j = 0; j < n; ++j) {
      if (z[j] > threshold) level |= uint64_t{1} << j;
    }
    Rational weight = next - prev;
    out.value += weight * f.Value(level);
    out.levels.emplace_back(level, weight);
    prev = next;
  }
  return out;
}

std::vector<std::pair<uint64_t, Rational>> LevelSetDecomposition(
    const SubmodularOracle& f, const std::vector<Rational>& z) {
  LovaszEvaluation eval = Lovasz(f, z);
  std::vector<std::pair<uint64_t, Rational>> columns;
  for (const auto& [set, weight] : eval.levels) {
    if (set != 0 && weight > 0) columns.emplace_back(set, weight);
  }
  return columns;
}

SfmResult SfmBrute(const SubmodularOracle& f, int cap) {
  int n = f.ground()->size();
  if (n > cap) {
    throw CapExceededError("sfm_brute: n=" + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
  }
  uint64_t full = f.ground()->full_mask();
  SfmResult best{0, f.Value(0)};
  for (uint64_t s = 1; s <= full; ++s) {
    Rational v = f.Value(s);
    if (v < best.value) best = {s, v};
    if (s == full) break;
  }
  return best;
}

namespace {

// Linear optimization over the base polytope: the Edmonds greedy vertex for
// the order of ascending x (ties by index) minimizes x^T q.
std::vector<double> GreedyVertex(const SubmodularOracle& f,
                                 const std::vector<double>& x) {
  int n = static_cast<int>(x.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return x[a] < x[b]; });
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

// Affine minimization over the hull of the points in S: solves the KKT
// system with the Gram matrix. Returns barycentric coordinates.
std::vector<double> AffineMinimize(const std::vector<std::vector<double>>& s) {
  int m = static_cast<int>(s.size());
  int dim = static_cast<int>(s[0].size());
  int rows = m + 1;
  std::vector<std::vector<double>> a(rows, std::vector<double>(rows + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double dot = 0;
      for (int d = 0; d < dim; ++d) dot += s[i][d] * s[j][d];
      a[i][j] = dot;
    }
    a[i][m] = 1.0;
    a[i][rows] = 0.0;
  }
  for (int j = 0; j < m; ++j) a[m][j] = 1.0;
  a[m][rows] = 1.0;

  // Gaussian elimination with partial pivoting; a tiny ridge keeps nearly
  // affinely dependent active sets solvable.
  for (int i = 0; i < m; ++i) a[i][i] += 1e-13;
  for (int col = 0; col < rows; ++col) {
    int pivot = col;
    for (int r = col + 1; r < rows; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    if (std::fabs(a[col][col]) < 1e-300) continue;
    for (int r = 0; r < rows; ++r) {
      if (r == col) continue;
      double factor = a[r][col] / a[col][col];
      if (factor == 0) continue;
      for (int c = col; c <= rows; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> alpha(m);
  for (int i = 0; i < m; ++i) {
    alpha[i] = std::fabs(a[i][i]) < 1e-300 ? 0.0 : a[i][rows] / a[i][i];
  }
  return alpha;
}

}  // namespace

SfmResult SfmMinNorm(const SubmodularOracle& f) {
  int n = f.ground()->size();
  if (f.Value(0) != 0) {
    throw PreconditionError("sfm_min_norm requires a normalized oracle");
  }
  const double tol = 1e-9;
  const int max_major = 200 * std::max(n * n, 25);

  std::vector<double> x0(n, 0.0);
  std::vector<std::vector<double>> points{GreedyVertex(f, x0)};
  std::vector<double> lambda{1.0};
  std::vector<double> x = points[0];

  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  int major = 0;
  for (; major < max_major; ++major) {
    std::vector<double> q = GreedyVertex(f, x);
    double xx = dot(x, x);
    double xq = dot(x, q);
    if (xx - xq <= tol * std::max(1.0, xx)) break;
    points.push_back(q);
    lambda.push_back(0.0);

    // Minor cycles: pull x to the affine minimizer, trimming the active set
    // whenever a barycentric coordinate would go negative.
    for (int minor = 0; minor < 10000; ++minor) {
      std::vector<double> alpha = AffineMinimize(points);
      bool interior = true;
      for (double a : alpha) {
        if (a < -1e-12) {
          interior = false;
          break;
        }
      }
      if (interior) {
        lambda = alpha;
        break;
      }
      double theta = 1.0;
      for (size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < lambda[i]) {
          double cand = lambda[i] / (lambda[i] - alpha[i]);
          theta = std::min(theta, cand);
        }
      }
      for (size_t i = 0; i < lambda.size(); ++i) {
        lambda[i] = (1 - theta) * lambda[i] + theta * alpha[i];
      }
      // Drop points at (numerically) zero weight.
      std::vector<std::vector<double>> kept_points;
      std::vector<double> kept_lambda;
      for (size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > 1e-12) {
          kept_points.push_back(points[i]);
          kept_lambda.push_back(lambda[i]);
        }
      }
      if (kept_points.empty()) {
        kept_points.push_back(points.back());
        kept_lambda.push_back(1.0);
      }
      points = std::move(kept_points);
      lambda = std::move(kept_lambda);
    }
    // Recompose x from the active set.
    for (int d = 0; d < n; ++d) {
      double v = 0;
      for (size_t i = 0; i < points.size(); ++i) v += lambda[i] * points[i][d];
      x[d] = v;
    }
  }
  if (major >= max_major) {
    throw SolverError("sfm_min_norm did not converge; best bound " +
                      std::to_string(-0.5 * dot(x, x)));
  }

  // Candidate level sets of the final point, re-evaluated exactly: prefixes
  // of both tie orders around equal coordinates.
  std::vector<int> asc(n), desc(n);
  std::iota(asc.begin(), asc.end(), 0);
  std::iota(desc.begin(), desc.end(), 0);
  std::stable_sort(asc.begin(), asc.end(),
                   [&](int a, int b) { return x[a] < x[b]; });
  std::stable_sort(desc.begin(), desc.end(), [&](int a, int b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return a > b;
  });
  SfmResult best{0, f.Value(0)};
  auto consider = [&](uint64_t mask) {
    Rational v = f.Value(mask);
    if (v < best.value || (v == best.value && mask < best.minimizer)) {
      best = {mask, v};
    }
  };
  uint64_t prefix = 0;
  for (int i = 0; i < n; ++i) {
    prefix |= uint64_t{1} << asc[i];
    consider(prefix);
  }
  prefix = 0;
  for (int i = 0; i < n; ++i) {
    prefix |= uint64_t{1} << desc[i];
    consider(prefix);
  }
  return best;
}

SfmResult SfmRing(const SubmodularOracle& f, const RingFamily& ring,
                  int cap_log2) {
  if (!ring.ground()->SameAs(*f.ground())) {
    throw DomainMismatchError("sfm_ring: ring over a different ground set");
  }
  std::vector<uint64_t> members = ring.EnumerateMembers(cap_log2);
  if (members.empty()) throw InfeasibleError("sfm_ring: empty ring");
  SfmResult best{members[0], f.Value(members[0])};
  for (size_t i = 1; i < members.size(); ++i) {
    Rational v = f.Value(members[i]);
    if (v < best.value) best = {members[i], v};
  }
  return best;
}

MvSfmResult SfmMvRing(const MultivariateOracle& g,
                      const RingFamily& lifted_ring, int cap_log2) {
  LiftedGroundSet space(g.ground(), g.agents());
  if (!lifted_ring.ground()->SameAs(*space.lifted())) {
    throw DomainMismatchError(
        "sfm_mv_ring expects the ring over the lifted index space");
  }
  RingFamily verified = LiftMvRing(space, lifted_ring, cap_log2);
  SubmodularOracle f(
      space.lifted(), [&g](uint64_t bits) { return g.ValuePacked(bits); },
      g.flags(), "lift(" + g.name() + ")");
  SfmResult inner = SfmRing(f, verified, cap_log2);
  MvSfmResult out;
  out.minimizer = space.Unpack(inner.minimizer);
  out.value = inner.value;
  return out;
}

DualFeasibility DualFeasible(const SubmodularOracle& f,
                             const std::vector<Rational>& y,
                             const Clutter& blocker, int brute_cap) {
  if (y.size() != blocker.members().size()) {
    throw PreconditionError("dual_feasible: one weight per blocker member");
  }
  for (const Rational& w : y) {
    if (w < 0) throw PreconditionError("dual weights must be >= 0");
  }
  int n = f.ground()->size();
  std::vector<Rational> load(n, Rational(0));
  for (size_t b = 0; b < y.size(); ++b) {
    ForEachBit(blocker.members()[b], [&](int v) { load[v] += y[b]; });
  }
  SubmodularOracle h(
      f.ground(),
      [&f, load](uint64_t bits) {
        Rational sum = f.Value(bits);
        ForEachBit(bits, [&](int v) { sum -= load[v]; });
        return sum;
      },
      OracleFlags{}, "dual-slack");
  SfmResult min =
      n <= brute_cap ? SfmBrute(h, brute_cap) : SfmMinNorm(h);
  DualFeasibility out;
  out.slack = min.value;
  out.feasible = min.value >= 0;
  if (!out.feasible) out.violated_set = min.minimizer;
  return out;
}

}  // namespace masub
