// Copyright 2026 The idvmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idv/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "idv/core.hpp"

namespace idv {
namespace {

using Real = long double;
using Matrix = std::vector<std::vector<Real>>;

constexpr Real kEps = 1e-13L;

// Solves M z = rhs (or M^T z = rhs) by Gaussian elimination with partial
// pivoting. M is square and, for a valid basis, non-singular.
std::vector<Real> solve(Matrix m, std::vector<Real> rhs, bool transpose) {
  const std::size_t t = rhs.size();
  if (transpose) {
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = i + 1; j < t; ++j) std::swap(m[i][j], m[j][i]);
    }
  }
  for (std::size_t col = 0; col < t; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < t; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    }
    if (std::fabs(m[piv][col]) < 1e-300L) throw DomainError("matrix game: singular basis");
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (std::size_t r = col + 1; r < t; ++r) {
      const Real f = m[r][col] / m[col][col];
      if (f == 0.0L) continue;
      for (std::size_t c = col; c < t; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Real> z(t);
  for (std::size_t i = t; i-- > 0;) {
    Real s = rhs[i];
    for (std::size_t c = i + 1; c < t; ++c) s -= m[i][c] * z[c];
    z[i] = s / m[i][i];
  }
  return z;
}

// Column player's program with A' = A + shift > 0:
//   max 1^T y  s.t.  A' y <= 1, y >= 0,
// whose optimum is 1 / (value + shift) and whose duals, rescaled, are the row
// mixture. Revised simplex: a basis is a set T of tight rows and an equally
// sized set Y of basic columns, and every iterate is recomputed from the
// original matrix through the t x t block A'[T][Y]. Entering and leaving
// choices follow Bland's rule (variable id = column, or cols + row for a
// slack).
//
// The shift is small relative to the payoff range. A unit shift on payoffs in
// [0, 1] makes columns that differ by 1e-7 nearly parallel.
GameSolution solve_lp(const std::vector<std::vector<double>>& payoff) {
  const std::size_t rows = payoff.size();
  const std::size_t cols = payoff.front().size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : payoff) {
    for (double x : r) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const Real range = hi > lo ? static_cast<Real>(hi) - lo : 1.0L;
  const Real shift = 1e-2L * range - static_cast<Real>(lo);
  auto a = [&](std::size_t r, std::size_t c) { return static_cast<Real>(payoff[r][c]) + shift; };

  std::vector<std::size_t> tight;  // T
  std::vector<std::size_t> basic;  // Y, same size as T
  std::vector<char> in_tight(rows, 0), in_basic(cols, 0);

  auto block = [&] {
    Matrix m(tight.size(), std::vector<Real>(basic.size()));
    for (std::size_t i = 0; i < tight.size(); ++i) {
      for (std::size_t j = 0; j < basic.size(); ++j) m[i][j] = a(tight[i], basic[j]);
    }
    return m;
  };

  std::vector<Real> y_basic, duals;
  const std::size_t max_iter = 50 * (rows + cols) + 1000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iter) throw DomainError("matrix game: simplex did not converge");
    const Matrix m = block();
    const std::size_t t = tight.size();
    y_basic = t ? solve(m, std::vector<Real>(t, 1.0L), false) : std::vector<Real>{};
    duals = t ? solve(m, std::vector<Real>(t, 1.0L), true) : std::vector<Real>{};

    // Pricing in id order: columns first, then slacks of tight rows.
    std::size_t enter_col = cols, enter_row = rows;
    for (std::size_t c = 0; c < cols && enter_col == cols; ++c) {
      if (in_basic[c]) continue;
      Real reduced = 1.0L;
      for (std::size_t i = 0; i < t; ++i) reduced -= duals[i] * a(tight[i], c);
      if (reduced > kEps) enter_col = c;
    }
    if (enter_col == cols) {
      std::size_t best = rows;
      for (std::size_t i = 0; i < t; ++i) {
        if (-duals[i] > kEps && (best == rows || tight[i] < tight[best])) best = i;
      }
      if (best == rows) break;
      enter_row = best;
    }

    // Direction: basic y decrease by theta * d; slack of a non-tight row r
    // decreases by theta * rate[r].
    std::vector<Real> rhs(t, 0.0L);
    if (enter_col != cols) {
      for (std::size_t i = 0; i < t; ++i) rhs[i] = a(tight[i], enter_col);
    } else {
      rhs[enter_row] = 1.0L;
    }
    const std::vector<Real> d = t ? solve(m, rhs, false) : std::vector<Real>{};

    // Two candidates tie when taking either step leaves the other's variable
    // at most kEps below zero; the tolerance is on slack, not on step length,
    // since rates can be large.
    Real ratio = std::numeric_limits<Real>::infinity();
    Real leave_rate = 0.0L;
    std::size_t leave_id = std::numeric_limits<std::size_t>::max();
    auto consider = [&](Real value, Real rate, std::size_t id) {
      if (rate <= kEps) return;
      const Real step = std::max(value, 0.0L) / rate;
      const bool better = step < ratio && (ratio - step) * rate > kEps;
      const bool tie = step < ratio ? !better : (step - ratio) * leave_rate <= kEps;
      if (better || (tie && id < leave_id)) {
        ratio = std::min(ratio, step);
        leave_rate = rate;
        leave_id = id;
      }
    };
    for (std::size_t j = 0; j < t; ++j) consider(y_basic[j], d[j], basic[j]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (in_tight[r]) continue;
      Real used = 0.0L, rate = 0.0L;
      for (std::size_t j = 0; j < t; ++j) {
        used += a(r, basic[j]) * y_basic[j];
        rate -= a(r, basic[j]) * d[j];
      }
      if (enter_col != cols) rate += a(r, enter_col);
      consider(1.0L - used, rate, cols + r);
    }
    if (leave_id == std::numeric_limits<std::size_t>::max()) {
      throw DomainError("matrix game: unbounded program");
    }

    if (enter_col != cols) {
      if (leave_id < cols) {
        *std::find(basic.begin(), basic.end(), leave_id) = enter_col;
        in_basic[leave_id] = 0;
      } else {
        basic.push_back(enter_col);
        tight.push_back(leave_id - cols);
        in_tight[leave_id - cols] = 1;
      }
      in_basic[enter_col] = 1;
    } else {
      const std::size_t row = tight[enter_row];
      if (leave_id < cols) {
        const auto pos = std::find(basic.begin(), basic.end(), leave_id) - basic.begin();
        basic.erase(basic.begin() + pos);
        in_basic[leave_id] = 0;
        tight.erase(tight.begin() + static_cast<std::ptrdiff_t>(enter_row));
      } else {
        tight[enter_row] = leave_id - cols;
        in_tight[leave_id - cols] = 1;
      }
      in_tight[row] = 0;
    }
  }

  Real z = 0.0L;
  for (Real y : y_basic) z += y;
  Real w = 0.0L;
  for (Real d : duals) w += std::max(0.0L, d);
  GameSolution sol;
  sol.value = static_cast<double>(1.0L / z - shift);
  sol.row_strategy.assign(rows, 0.0);
  sol.column_strategy.assign(cols, 0.0);
  for (std::size_t i = 0; i < tight.size(); ++i) {
    sol.row_strategy[tight[i]] = static_cast<double>(std::max(0.0L, duals[i]) / w);
  }
  for (std::size_t j = 0; j < basic.size(); ++j) {
    sol.column_strategy[basic[j]] = static_cast<double>(std::max(0.0L, y_basic[j]) / z);
  }
  return sol;
}

}  // namespace

GameSolution solve_matrix_game(const std::vector<std::vector<double>>& payoff) {
  if (payoff.empty() || payoff.front().empty()) {
    throw DomainError("matrix game: payoff matrix is empty");
  }
  for (const auto& r : payoff) {
    if (r.size() != payoff.front().size()) {
      throw DomainError("matrix game: ragged payoff matrix");
    }
  }
  return solve_lp(payoff);
}

}  // namespace idv
