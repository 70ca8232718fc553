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

#include "masub/simplex.h"

#include <vector>

#include "masub/errors.h"

namespace masub {

namespace {

// Dense tableau with Bland's anti-cycling rule. Column layout:
// [0, n) structural x, [n, n+m) surplus, [n+m, n+2m) artificial.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<Rational>>& a,
          const std::vector<Rational>& b)
      : m_(static_cast<int>(a.size())),
        n_(m_ ? static_cast<int>(a[0].size()) : 0),
        cols_(n_ + 2 * m_),
        rows_(m_, std::vector<Rational>(cols_ + 1, Rational(0))),
        basis_(m_),
        row_signs_(m_, 1) {
    for (int i = 0; i < m_; ++i) {
      Rational rhs = b[i];
      int sign = rhs >= 0 ? 1 : -1;
      row_signs_[i] = sign;
      for (int j = 0; j < n_; ++j) rows_[i][j] = sign * a[i][j];
      rows_[i][n_ + i] = Rational(-sign);  // surplus
      rows_[i][n_ + m_ + i] = 1;           // artificial
      rows_[i][cols_] = sign * rhs;
      basis_[i] = n_ + m_ + i;
    }
  }

  // Minimizes cost over the current feasible region; artificial columns can
  // be barred from entering. Returns false when unbounded.
  bool Minimize(const std::vector<Rational>& cost, bool bar_artificials) {
    while (true) {
      // Reduced costs via the dual multipliers of the current basis.
      std::vector<Rational> y(m_);
      for (int i = 0; i < m_; ++i) y[i] = cost[basis_[i]];
      int entering = -1;
      for (int j = 0; j < cols_; ++j) {
        if (bar_artificials && j >= n_ + m_) break;
        if (InBasis(j)) continue;
        Rational reduced = cost[j];
        for (int i = 0; i < m_; ++i) {
          if (y[i] != 0 && rows_[i][j] != 0) reduced -= y[i] * rows_[i][j];
        }
        if (reduced < 0) {
          entering = j;  // Bland: smallest index
          break;
        }
      }
      if (entering < 0) return true;
      int leaving = -1;
      Rational best_ratio;
      for (int i = 0; i < m_; ++i) {
        if (rows_[i][entering] <= 0) continue;
        Rational ratio = rows_[i][cols_] / rows_[i][entering];
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;  // unbounded
      Pivot(leaving, entering);
    }
  }

  void Pivot(int row, int col) {
    Rational inv = 1 / rows_[row][col];
    for (int c = 0; c <= cols_; ++c) rows_[row][c] *= inv;
    for (int r = 0; r < m_; ++r) {
      if (r == row || rows_[r][col] == 0) continue;
      Rational factor = rows_[r][col];
      for (int c = 0; c <= cols_; ++c) {
        rows_[r][c] -= factor * rows_[row][c];
      }
    }
    basis_[row] = col;
  }

  bool InBasis(int col) const {
    for (int b : basis_) {
      if (b == col) return true;
    }
    return false;
  }

  // Pivots residual basic artificials out on any structural column, so
  // phase 2 can bar the artificial block entirely.
  void EvictArtificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      for (int j = 0; j < n_ + m_; ++j) {
        if (rows_[i][j] != 0) {
          Pivot(i, j);
          break;
        }
      }
    }
  }

  Rational SolutionValue(const std::vector<Rational>& cost) const {
    Rational total = 0;
    for (int i = 0; i < m_; ++i) total += cost[basis_[i]] * rows_[i][cols_];
    return total;
  }

  std::vector<Rational> StructuralSolution() const {
    std::vector<Rational> x(n_, Rational(0));
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_];
    }
    return x;
  }

  // Row duals y = c_B B^{-1}, read off through the artificial columns
  // (their tableau entries are exactly B^{-1} e_i). Rows were sign-flipped
  // for negative right-hand sides, so flip the multipliers back.
  std::vector<Rational> RowDuals(const std::vector<Rational>& cost,
                                 const std::vector<int>& row_sign) const {
    std::vector<Rational> y(m_, Rational(0));
    for (int i = 0; i < m_; ++i) {
      Rational v = 0;
      for (int r = 0; r < m_; ++r) {
        if (cost[basis_[r]] != 0 && rows_[r][n_ + m_ + i] != 0) {
          v += cost[basis_[r]] * rows_[r][n_ + m_ + i];
        }
      }
      y[i] = row_sign[i] * v;
    }
    return y;
  }

  const std::vector<int>& row_signs() const { return row_signs_; }

  int n() const { return n_; }
  int m() const { return m_; }
  int cols() const { return cols_; }

 private:
  int m_, n_, cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<int> basis_;
  std::vector<int> row_signs_;
};

}  // namespace

LpResult SolveCoveringLp(const std::vector<std::vector<Rational>>& a,
                         const std::vector<Rational>& b,
                         const std::vector<Rational>& c) {
  LpResult result;
  if (a.empty()) {
    result.status = LpResult::Status::kOptimal;
    result.objective = 0;
    result.x.assign(c.size(), Rational(0));
    return result;
  }
  int m = static_cast<int>(a.size());
  int n = static_cast<int>(a[0].size());
  Tableau tableau(a, b);

  std::vector<Rational> phase1(tableau.cols(), Rational(0));
  for (int j = n + m; j < tableau.cols(); ++j) phase1[j] = 1;
  if (!tableau.Minimize(phase1, /*bar_artificials=*/false)) {
    throw SolverError("phase-1 simplex reported unbounded");
  }
  if (tableau.SolutionValue(phase1) != 0) {
    result.status = LpResult::Status::kInfeasible;
    return result;
  }
  tableau.EvictArtificials();

  std::vector<Rational> phase2(tableau.cols(), Rational(0));
  for (int j = 0; j < n; ++j) phase2[j] = c[j];
  if (!tableau.Minimize(phase2, /*bar_artificials=*/true)) {
    result.status = LpResult::Status::kUnbounded;
    return result;
  }
  result.status = LpResult::Status::kOptimal;
  result.objective = tableau.SolutionValue(phase2);
  result.x = tableau.StructuralSolution();
  result.duals = tableau.RowDuals(phase2, tableau.row_signs());
  return result;
}

}  // namespace masub
