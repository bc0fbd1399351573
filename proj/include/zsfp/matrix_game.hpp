// Copyright 2026 The zsfp Authors.
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

#ifndef ZSFP_MATRIX_GAME_HPP
#define ZSFP_MATRIX_GAME_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "zsfp/common.hpp"

namespace zsfp {

enum class TieRule { kLowestIndex, kUniformRandom };

namespace detail {

// Picks among the entries within kTieTolerance of the maximum.
inline int argmax_with_ties(const double* values, int n, TieRule rule,
                            Rng* rng) {
  if (n < 1) throw std::invalid_argument("best response over no actions");
  double best = values[0];
  for (int i = 1; i < n; ++i) best = std::max(best, values[i]);
  if (rule == TieRule::kLowestIndex) {
    for (int i = 0; i < n; ++i) {
      if (values[i] >= best - kTieTolerance) return i;
    }
  }
  if (rng == nullptr) {
    throw ConfigError("uniform random tie-breaking requires an RNG");
  }
  int count = 0;
  for (int i = 0; i < n; ++i) count += values[i] >= best - kTieTolerance;
  int pick = rng->index(count);
  for (int i = 0; i < n; ++i) {
    if (values[i] >= best - kTieTolerance && pick-- == 0) return i;
  }
  return n - 1;  // unreachable
}

inline void check_opponent(Eigen::Index expected, const Vector& opponent) {
  if (opponent.size() != expected) {
    throw std::invalid_argument(
        "opponent strategy has " + std::to_string(opponent.size()) +
        " entries, payoff matrix expects " + std::to_string(expected));
  }
}

}  // namespace detail

// Row index maximizing row . (payoff * opponent).
inline int best_response_row(const Matrix& payoff, const Vector& opponent,
                             TieRule rule = TieRule::kLowestIndex,
                             Rng* rng = nullptr) {
  detail::check_opponent(payoff.cols(), opponent);
  const int rows = static_cast<int>(payoff.rows());
  double expected[64] = {};
  std::vector<double> heap;
  double* out = expected;
  if (rows > 64) {
    heap.resize(rows);
    out = heap.data();
  }
  for (int m = 0; m < rows; ++m) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < payoff.cols(); ++n) {
      acc += payoff(m, n) * opponent(n);
    }
    out[m] = acc;
  }
  return detail::argmax_with_ties(out, rows, rule, rng);
}

// Column index maximizing (opponent^T * payoff_for_col) . col, where
// payoff_for_col holds the column player's own payoffs.
inline int best_response_col(const Matrix& payoff_for_col,
                             const Vector& opponent,
                             TieRule rule = TieRule::kLowestIndex,
                             Rng* rng = nullptr) {
  detail::check_opponent(payoff_for_col.rows(), opponent);
  const int cols = static_cast<int>(payoff_for_col.cols());
  double expected[64] = {};
  std::vector<double> heap;
  double* out = expected;
  if (cols > 64) {
    heap.resize(cols);
    out = heap.data();
  }
  for (int n = 0; n < cols; ++n) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < payoff_for_col.rows(); ++m) {
      acc += opponent(m) * payoff_for_col(m, n);
    }
    out[n] = acc;
  }
  return detail::argmax_with_ties(out, cols, rule, rng);
}

struct MinimaxSolution {
  double value = 0.0;
  Vector row_strategy;
  Vector col_strategy;
  // More than one optimal strategy may exist for at least one player.
  bool degenerate = false;
};

namespace detail {

// Dense tableau for  max 1^T x  s.t.  A x <= 1, x >= 0  with A > 0.
// Slack columns follow the decision columns. Bland's rule throughout.
class BlandSimplex {
 public:
  explicit BlandSimplex(const Matrix& a)
      : m_(static_cast<int>(a.rows())),
        n_(static_cast<int>(a.cols())),
        width_(n_ + m_ + 1),
        tableau_((m_ + 1) * width_, 0.0),
        basis_(m_) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) at(i, j) = a(i, j);
      at(i, n_ + i) = 1.0;
      at(i, width_ - 1) = 1.0;
      basis_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) at(m_, j) = -1.0;
  }

  void solve() {
    constexpr double kPivotEps = 1e-12;
    // Bland's rule cannot cycle; the bound only guards against a defect.
    const long max_pivots = 1000L * (m_ + n_ + 1);
    for (long iter = 0; iter < max_pivots; ++iter) {
      int enter = -1;
      for (int j = 0; j < n_ + m_; ++j) {
        if (at(m_, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double coeff = at(i, enter);
        if (coeff <= kPivotEps) continue;
        const double ratio = at(i, width_ - 1) / coeff;
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && leave >= 0 &&
             basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) throw Error("minimax LP unbounded; payoff not positive");
      pivot(leave, enter);
    }
    throw Error("minimax LP exceeded pivot limit");
  }

  double objective() const { return at(m_, width_ - 1); }

  Vector primal() const {
    Vector x = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = at(i, width_ - 1);
    }
    return x;
  }

  // Reduced costs of the slack columns.
  Vector dual() const {
    Vector u(m_);
    for (int i = 0; i < m_; ++i) u(i) = at(m_, n_ + i);
    return u;
  }

  bool degenerate() const {
    constexpr double kEps = 1e-10;
    std::vector<bool> basic(n_ + m_, false);
    for (int i = 0; i < m_; ++i) {
      basic[basis_[i]] = true;
      if (at(i, width_ - 1) <= kEps) return true;
    }
    for (int j = 0; j < n_ + m_; ++j) {
      if (!basic[j] && std::abs(at(m_, j)) <= kEps) return true;
    }
    return false;
  }

 private:
  double& at(int i, int j) { return tableau_[i * width_ + j]; }
  double at(int i, int j) const { return tableau_[i * width_ + j]; }

  void pivot(int row, int col) {
    const double p = at(row, col);
    for (int j = 0; j < width_; ++j) at(row, j) /= p;
    at(row, col) = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  int m_;
  int n_;
  int width_;
  std::vector<double> tableau_;
  std::vector<int> basis_;
};

inline Vector project_to_simplex(Vector p) {
  p = p.cwiseMax(0.0);
  return p / p.sum();
}

}  // namespace detail

// Value and optimal strategies of the zero-sum game where the row player
// maximizes `payoff` and the column player minimizes it.
inline MinimaxSolution minimax_solve(const Matrix& payoff) {
  if (payoff.rows() < 1 || payoff.cols() < 1) {
    throw std::invalid_argument("matrix game needs at least one row and column");
  }
  if (!payoff.allFinite()) {
    throw std::invalid_argument("matrix game has non-finite entries");
  }
  // Shift so every entry is >= 1; the game value moves by the same amount.
  const double shift = 1.0 - payoff.minCoeff();
  detail::BlandSimplex lp(payoff.array() + shift);
  lp.solve();

  const double total = lp.objective();  // = 1 / shifted value
  MinimaxSolution sol;
  sol.col_strategy = detail::project_to_simplex(lp.primal() / total);
  sol.row_strategy = detail::project_to_simplex(lp.dual() / total);
  sol.value = 1.0 / total - shift;
  sol.degenerate = lp.degenerate();
  return sol;
}

// val_1: the row player's minimax value of its own matrix.
// val_2: the column player's minimax value of its own matrix.
inline double minimax_value(Player p, const Matrix& own_payoff) {
  return p == Player::kOne ? minimax_solve(own_payoff).value
                           : minimax_solve(own_payoff.transpose()).value;
}

}  // namespace zsfp

#endif  // ZSFP_MATRIX_GAME_HPP
