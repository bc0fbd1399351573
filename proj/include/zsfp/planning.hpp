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

#ifndef ZSFP_PLANNING_HPP
#define ZSFP_PLANNING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "zsfp/game.hpp"
#include "zsfp/matrix_game.hpp"

namespace zsfp {

// Continuation payoffs per player and state.
struct ValueVector {
  std::array<Vector, 2> by_player;

  Vector& operator[](Player p) { return by_player[index_of(p)]; }
  const Vector& operator[](Player p) const { return by_player[index_of(p)]; }
};

struct PolicyEvaluation {
  ValueVector values;
  QTable q;
};

namespace detail {

inline void check_profile(const GameSpec& spec, const StrategyProfile& profile) {
  for (Player p : kPlayers) {
    if (profile[p].size() != std::size_t(spec.n_states)) {
      throw std::invalid_argument("strategy profile has wrong state count");
    }
    for (const auto& pi : profile[p]) {
      if (pi.size() != spec.n_actions(p)) {
        throw std::invalid_argument("strategy profile has wrong action count");
      }
    }
  }
}

// Q(s, a) = r(s, a) + discount * sum_s' v(s') p(s' | s, a)
inline std::vector<Matrix> q_from_values(const GameSpec& spec, Player p,
                                         const Vector& v) {
  std::vector<Matrix> q(spec.n_states);
  for (int s = 0; s < spec.n_states; ++s) {
    q[s] = spec.payoff(p, s);
    for (int a1 = 0; a1 < spec.n_actions_1; ++a1) {
      for (int a2 = 0; a2 < spec.n_actions_2; ++a2) {
        const auto row = spec.next_state_dist(s, a1, a2);
        double cont = 0.0;
        for (int t = 0; t < spec.n_states; ++t) cont += row[t] * v(t);
        q[s](a1, a2) += spec.discount * cont;
      }
    }
  }
  return q;
}

}  // namespace detail

// Exact values of a stationary profile: v = r_pi + discount * P_pi v solved
// directly, and the Q-functions derived from v.
inline PolicyEvaluation policy_eval(const GameSpec& spec,
                                    const StrategyProfile& profile) {
  detail::check_profile(spec, profile);
  const int n = spec.n_states;
  const auto& pi1 = profile[Player::kOne];
  const auto& pi2 = profile[Player::kTwo];

  Matrix system = Matrix::Identity(n, n);
  std::array<Vector, 2> rhs = {Vector::Zero(n), Vector::Zero(n)};
  for (int s = 0; s < n; ++s) {
    for (int a1 = 0; a1 < spec.n_actions_1; ++a1) {
      for (int a2 = 0; a2 < spec.n_actions_2; ++a2) {
        const double w = pi1[s](a1) * pi2[s](a2);
        if (w == 0.0) continue;
        rhs[0](s) += w * spec.payoff_1[s](a1, a2);
        rhs[1](s) += w * spec.payoff_2[s](a1, a2);
        const auto row = spec.next_state_dist(s, a1, a2);
        for (int t = 0; t < n; ++t) {
          system(s, t) -= spec.discount * w * row[t];
        }
      }
    }
  }

  // I - discount * P_pi is strictly diagonally dominant for discount < 1.
  const Eigen::PartialPivLU<Matrix> lu(system);
  PolicyEvaluation out;
  for (Player p : kPlayers) {
    out.values[p] = lu.solve(rhs[index_of(p)]);
    out.q[p] = detail::q_from_values(spec, p, out.values[p]);
  }
  return out;
}

// U_i(pi) = sum_s p0(s) v_i(s).
inline std::array<double, 2> utility(const GameSpec& spec,
                                     const StrategyProfile& profile) {
  const auto eval = policy_eval(spec, profile);
  return {spec.initial_dist.dot(eval.values[Player::kOne]),
          spec.initial_dist.dot(eval.values[Player::kTwo])};
}

// T_{i,s}(Q) = R_{i,s} + discount * sum_s' val_i(Q_{s'}) P_{s'|s}.
inline std::vector<Matrix> shapley_operator(const GameSpec& spec,
                                            const std::vector<Matrix>& q,
                                            Player p) {
  if (q.size() != std::size_t(spec.n_states)) {
    throw std::invalid_argument("Q table has wrong state count");
  }
  Vector values(spec.n_states);
  for (int s = 0; s < spec.n_states; ++s) values(s) = minimax_value(p, q[s]);
  return detail::q_from_values(spec, p, values);
}

inline double sup_distance(const std::vector<Matrix>& a,
                           const std::vector<Matrix>& b) {
  double d = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    d = std::max(d, (a[s] - b[s]).cwiseAbs().maxCoeff());
  }
  return d;
}

struct ShapleySolution {
  QTable q_star;
  ValueVector v_star;
  StrategyProfile equilibrium;
  // States whose Q*_1 matrix game admits several optimal strategies.
  std::vector<bool> degenerate;
  int iterations = 0;
  // max over players and states of ||T_{i,s}(Q*) - Q*_{i,s}||_max
  double residual = 0.0;
};

// Fixed point of the Shapley operators by value iteration from the stage
// payoffs. Stops once a sweep moves Q by at most tolerance*(1-g)/g, which
// bounds the distance to the fixed point by `tolerance`.
inline ShapleySolution shapley_value_iteration(const GameSpec& spec,
                                               double tolerance = 1e-9,
                                               int max_iters = 100000) {
  require_valid(spec);
  if (!spec.zero_sum) {
    throw ConfigError("Shapley value iteration requires a zero-sum game");
  }
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");

  const double g = spec.discount;
  const double sweep_bound =
      g > 0.0 ? tolerance * (1.0 - g) / g : std::numeric_limits<double>::infinity();

  ShapleySolution sol;
  sol.q_star = QTable::stage_payoffs(spec);
  double change = std::numeric_limits<double>::infinity();
  int iter = 0;
  while (change > sweep_bound) {
    if (iter >= max_iters) {
      throw ConvergenceError("Shapley value iteration hit max_iters=" +
                                 std::to_string(max_iters) + " with residual " +
                                 format_real(change),
                             change);
    }
    change = 0.0;
    for (Player p : kPlayers) {
      auto next = shapley_operator(spec, sol.q_star[p], p);
      change = std::max(change, sup_distance(next, sol.q_star[p]));
      sol.q_star[p] = std::move(next);
    }
    ++iter;
  }
  sol.iterations = iter;

  sol.residual = 0.0;
  for (Player p : kPlayers) {
    sol.v_star[p].resize(spec.n_states);
    sol.residual = std::max(
        sol.residual,
        sup_distance(shapley_operator(spec, sol.q_star[p], p), sol.q_star[p]));
  }
  for (Player p : kPlayers) sol.equilibrium[p].resize(spec.n_states);
  sol.degenerate.assign(spec.n_states, false);
  for (int s = 0; s < spec.n_states; ++s) {
    const auto mm = minimax_solve(sol.q_star[Player::kOne][s]);
    sol.v_star[Player::kOne](s) = mm.value;
    sol.v_star[Player::kTwo](s) =
        minimax_value(Player::kTwo, sol.q_star[Player::kTwo][s]);
    sol.equilibrium[Player::kOne][s] = mm.row_strategy;
    sol.equilibrium[Player::kTwo][s] = mm.col_strategy;
    sol.degenerate[s] = mm.degenerate;
  }
  return sol;
}

// Optimal value of `player` when the opponent's stationary strategy is
// fixed: value iteration on the induced single-agent MDP.
inline Vector best_response_value(const GameSpec& spec,
                                  const std::vector<Vector>& opponent_strategy,
                                  Player player) {
  const Player opp = other(player);
  if (opponent_strategy.size() != std::size_t(spec.n_states)) {
    throw std::invalid_argument("opponent strategy has wrong state count");
  }
  const int n = spec.n_states;
  const int own_actions = spec.n_actions(player);
  const int opp_actions = spec.n_actions(opp);

  // Opponent-averaged stage payoffs and transitions per (s, own action).
  std::vector<double> reward(static_cast<std::size_t>(n) * own_actions, 0.0);
  std::vector<double> kernel(static_cast<std::size_t>(n) * own_actions * n,
                             0.0);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < own_actions; ++a) {
      const std::size_t idx = static_cast<std::size_t>(s) * own_actions + a;
      for (int b = 0; b < opp_actions; ++b) {
        const double w = opponent_strategy[s](b);
        if (w == 0.0) continue;
        const int a1 = player == Player::kOne ? a : b;
        const int a2 = player == Player::kOne ? b : a;
        reward[idx] += w * spec.payoff(player, s)(a1, a2);
        const auto row = spec.next_state_dist(s, a1, a2);
        for (int t = 0; t < n; ++t) kernel[idx * n + t] += w * row[t];
      }
    }
  }

  const double g = spec.discount;
  const double sweep_bound =
      g > 0.0 ? 1e-9 * (1.0 - g) / g : std::numeric_limits<double>::infinity();
  Vector v = Vector::Zero(n);
  Vector next(n);
  for (;;) {
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < own_actions; ++a) {
        const std::size_t idx = static_cast<std::size_t>(s) * own_actions + a;
        double cont = 0.0;
        for (int t = 0; t < n; ++t) cont += kernel[idx * n + t] * v(t);
        best = std::max(best, reward[idx] + g * cont);
      }
      next(s) = best;
    }
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (change <= sweep_bound) break;
  }
  return v;
}

struct Exploitability {
  // gap_i(s) = best-response value - value of the profile.
  std::array<Vector, 2> gaps;
  double value = 0.0;
};

inline Exploitability exploitability(const GameSpec& spec,
                                     const StrategyProfile& profile) {
  const auto eval = policy_eval(spec, profile);
  Exploitability out;
  out.value = -std::numeric_limits<double>::infinity();
  for (Player p : kPlayers) {
    const Vector br = best_response_value(spec, profile[other(p)], p);
    out.gaps[index_of(p)] = br - eval.values[p];
    out.value = std::max(out.value, out.gaps[index_of(p)].maxCoeff());
  }
  return out;
}

}  // namespace zsfp

#endif  // ZSFP_PLANNING_HPP
