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

#ifndef ZSFP_GAME_HPP
#define ZSFP_GAME_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "zsfp/common.hpp"

namespace zsfp {

// A finite two-player discounted stochastic game. Both players have the
// same action sets at every state. Entry [m][n] of payoff_i[s] is player
// i's stage payoff when player 1 plays m and player 2 plays n.
struct GameSpec {
  int n_states = 0;
  int n_actions_1 = 0;
  int n_actions_2 = 0;
  std::vector<Matrix> payoff_1;
  std::vector<Matrix> payoff_2;
  // Row-major [s][a1][a2][s'].
  std::vector<double> transition;
  double discount = 0.0;
  Vector initial_dist;
  bool zero_sum = false;

  int n_actions(Player p) const {
    return p == Player::kOne ? n_actions_1 : n_actions_2;
  }

  const Matrix& payoff(Player p, int s) const {
    return p == Player::kOne ? payoff_1[s] : payoff_2[s];
  }

  std::size_t row_offset(int s, int a1, int a2) const {
    return ((static_cast<std::size_t>(s) * n_actions_1 + a1) * n_actions_2 +
            a2) *
           n_states;
  }

  std::span<const double> next_state_dist(int s, int a1, int a2) const {
    return {transition.data() + row_offset(s, a1, a2),
            static_cast<std::size_t>(n_states)};
  }

  std::span<double> next_state_dist(int s, int a1, int a2) {
    return {transition.data() + row_offset(s, a1, a2),
            static_cast<std::size_t>(n_states)};
  }

  // max_s ||R_{i,s}||_max
  double max_abs_payoff(Player p) const {
    double m = 0.0;
    for (int s = 0; s < n_states; ++s) {
      m = std::max(m, payoff(p, s).cwiseAbs().maxCoeff());
    }
    return m;
  }
};

inline bool operator==(const GameSpec& a, const GameSpec& b) {
  auto same = [](const std::vector<Matrix>& x, const std::vector<Matrix>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].rows() != y[i].rows() || x[i].cols() != y[i].cols() ||
          x[i] != y[i]) {
        return false;
      }
    }
    return true;
  };
  return a.n_states == b.n_states && a.n_actions_1 == b.n_actions_1 &&
         a.n_actions_2 == b.n_actions_2 && a.discount == b.discount &&
         a.zero_sum == b.zero_sum && a.transition == b.transition &&
         a.initial_dist.size() == b.initial_dist.size() &&
         a.initial_dist == b.initial_dist && same(a.payoff_1, b.payoff_1) &&
         same(a.payoff_2, b.payoff_2);
}

// Per-state mixed strategies for both players.
struct StrategyProfile {
  std::array<std::vector<Vector>, 2> by_player;

  std::vector<Vector>& operator[](Player p) { return by_player[index_of(p)]; }
  const std::vector<Vector>& operator[](Player p) const {
    return by_player[index_of(p)];
  }

  static StrategyProfile uniform(const GameSpec& spec) {
    StrategyProfile profile;
    for (Player p : kPlayers) {
      const int n = spec.n_actions(p);
      profile[p].assign(spec.n_states, Vector::Constant(n, 1.0 / n));
    }
    return profile;
  }
};

// Per-player, per-state matrices over joint actions; true Q-functions or
// learner beliefs.
struct QTable {
  std::array<std::vector<Matrix>, 2> by_player;

  std::vector<Matrix>& operator[](Player p) { return by_player[index_of(p)]; }
  const std::vector<Matrix>& operator[](Player p) const {
    return by_player[index_of(p)];
  }

  static QTable stage_payoffs(const GameSpec& spec) {
    QTable q;
    q[Player::kOne] = spec.payoff_1;
    q[Player::kTwo] = spec.payoff_2;
    return q;
  }
};

struct Violation {
  enum class Kind {
    kShape,
    kDiscount,
    kNonFinite,
    kTransition,
    kInitialDist,
    kZeroSum,
  };
  Kind kind;
  int state = -1;
  int action_1 = -1;
  int action_2 = -1;
  std::string message;
};

namespace detail {

inline std::string join_messages(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

inline bool is_distribution(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= kProbabilityTolerance;
}

}  // namespace detail

// Every invariant violation, with the offending indices. Empty when valid.
inline std::vector<Violation> validate_spec(const GameSpec& spec) {
  std::vector<Violation> out;
  auto add = [&out](Violation::Kind kind, int s, int a1, int a2,
                    std::string msg) {
    out.push_back({kind, s, a1, a2, std::move(msg)});
  };

  if (spec.n_states < 1 || spec.n_actions_1 < 1 || spec.n_actions_2 < 1) {
    add(Violation::Kind::kShape, -1, -1, -1,
        "state and action counts must be positive");
    return out;
  }
  const auto n_rows = static_cast<std::size_t>(spec.n_states) *
                      spec.n_actions_1 * spec.n_actions_2;
  bool shape_ok = spec.payoff_1.size() == std::size_t(spec.n_states) &&
                  spec.payoff_2.size() == std::size_t(spec.n_states) &&
                  spec.transition.size() == n_rows * spec.n_states &&
                  spec.initial_dist.size() == spec.n_states;
  for (int s = 0; shape_ok && s < spec.n_states; ++s) {
    for (const auto* m : {&spec.payoff_1[s], &spec.payoff_2[s]}) {
      if (m->rows() != spec.n_actions_1 || m->cols() != spec.n_actions_2) {
        shape_ok = false;
      }
    }
  }
  if (!shape_ok) {
    add(Violation::Kind::kShape, -1, -1, -1,
        "array dimensions do not match n_states/n_actions");
    return out;
  }

  if (!(spec.discount >= 0.0 && spec.discount < 1.0)) {
    add(Violation::Kind::kDiscount, -1, -1, -1,
        "discount must be in [0, 1), got " + format_real(spec.discount));
  }

  for (int s = 0; s < spec.n_states; ++s) {
    for (int a1 = 0; a1 < spec.n_actions_1; ++a1) {
      for (int a2 = 0; a2 < spec.n_actions_2; ++a2) {
        const double r1 = spec.payoff_1[s](a1, a2);
        const double r2 = spec.payoff_2[s](a1, a2);
        std::ostringstream where;
        where << "(s=" << s << ", a1=" << a1 << ", a2=" << a2 << ")";
        if (!std::isfinite(r1) || !std::isfinite(r2)) {
          add(Violation::Kind::kNonFinite, s, a1, a2,
              "non-finite payoff at " + where.str());
        } else if (spec.zero_sum && r1 + r2 != 0.0) {
          add(Violation::Kind::kZeroSum, s, a1, a2,
              "zero-sum violated at " + where.str());
        }
        if (!detail::is_distribution(spec.next_state_dist(s, a1, a2))) {
          add(Violation::Kind::kTransition, s, a1, a2,
              "transition row at " + where.str() +
                  " is not a probability vector");
        }
      }
    }
  }

  if (!detail::is_distribution(std::span<const double>(
          spec.initial_dist.data(), spec.initial_dist.size()))) {
    add(Violation::Kind::kInitialDist, -1, -1, -1,
        "initial_dist is not a probability vector");
  }
  return out;
}

inline void require_valid(const GameSpec& spec) {
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    throw ValidationError("invalid game spec: " +
                          detail::join_messages(violations));
  }
}

// Random zero-sum game with strictly positive transition kernels. Player 1's
// stage payoffs at state j are uniform on an interval of width payoff_scale
// whose center rises linearly from -scale (first state) to +scale (last).
inline GameSpec generate_random_game(int n_states, int n_actions,
                                     double discount, double payoff_scale,
                                     std::uint64_t seed) {
  if (n_states < 1) throw ConfigError("n_states must be >= 1");
  if (n_actions < 1) throw ConfigError("n_actions must be >= 1");
  if (!(discount < 1.0)) throw ConfigError("discount must be < 1");
  if (!(discount >= 0.0)) throw ConfigError("discount must be >= 0");
  if (!(payoff_scale > 0.0)) throw ConfigError("payoff_scale must be > 0");

  constexpr double kMinTransitionWeight = 0.05;
  Rng rng(seed, Stream::kGenerator);

  GameSpec spec;
  spec.n_states = n_states;
  spec.n_actions_1 = n_actions;
  spec.n_actions_2 = n_actions;
  spec.discount = discount;
  spec.zero_sum = true;
  spec.initial_dist = Vector::Constant(n_states, 1.0 / n_states);

  for (int s = 0; s < n_states; ++s) {
    double lo = -payoff_scale;
    double hi = payoff_scale;
    if (n_states >= 2) {
      const double center =
          payoff_scale * (2.0 * s / (n_states - 1) - 1.0);
      lo = center - payoff_scale / 2;
      hi = center + payoff_scale / 2;
    }
    Matrix r(n_actions, n_actions);
    for (int a1 = 0; a1 < n_actions; ++a1) {
      for (int a2 = 0; a2 < n_actions; ++a2) {
        r(a1, a2) = lo + (hi - lo) * rng.uniform();
      }
    }
    spec.payoff_1.push_back(r);
    spec.payoff_2.push_back(-r);
  }

  spec.transition.resize(static_cast<std::size_t>(n_states) * n_actions *
                         n_actions * n_states);
  for (int s = 0; s < n_states; ++s) {
    for (int a1 = 0; a1 < n_actions; ++a1) {
      for (int a2 = 0; a2 < n_actions; ++a2) {
        auto row = spec.next_state_dist(s, a1, a2);
        if (n_states == 1) {
          row[0] = 1.0;
          continue;
        }
        double sum = 0.0;
        for (double& p : row) {
          // (kMinTransitionWeight, 1]
          p = 1.0 - (1.0 - kMinTransitionWeight) * rng.uniform();
          sum += p;
        }
        for (double& p : row) p /= sum;
      }
    }
  }
  return spec;
}

// Single-state zero-sum game with player-1 payoff matrix `payoff`.
inline GameSpec single_state_game(const Matrix& payoff, double discount) {
  GameSpec spec;
  spec.n_states = 1;
  spec.n_actions_1 = static_cast<int>(payoff.rows());
  spec.n_actions_2 = static_cast<int>(payoff.cols());
  spec.payoff_1 = {payoff};
  spec.payoff_2 = {-payoff};
  spec.transition.assign(payoff.size(), 1.0);
  spec.discount = discount;
  spec.initial_dist = Vector::Ones(1);
  spec.zero_sum = true;
  return spec;
}

inline GameSpec matching_pennies(double discount) {
  Matrix r(2, 2);
  r << 1, -1, -1, 1;
  return single_state_game(r, discount);
}

}  // namespace zsfp

#endif  // ZSFP_GAME_HPP
