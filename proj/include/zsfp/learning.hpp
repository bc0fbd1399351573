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

// Fictitious play for two-player discounted stochastic games.
//
// Each player keeps a belief about the opponent's stationary strategy at
// every state and a belief about its own Q-function. At the current state
// both play a best response in the auxiliary matrix game given by their
// Q-beliefs, then
//
//   strategy beliefs move toward the observed action with step alpha, and
//   Q-beliefs move toward  r + discount * E[v(s')]  with step beta,
//
// where v(s') is the best-response payoff under the current beliefs. Steps
// are indexed by visit counters, and beta must vanish faster than alpha so
// Q-beliefs evolve on the slower timescale.

#ifndef ZSFP_LEARNING_HPP
#define ZSFP_LEARNING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zsfp/game.hpp"
#include "zsfp/matrix_game.hpp"
#include "zsfp/planning.hpp"

namespace zsfp {

enum class Mode { kModelBased, kSelfBelief, kModelFree, kMinimaxQ };

inline std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kModelBased: return "model-based";
    case Mode::kSelfBelief: return "self-belief";
    case Mode::kModelFree: return "model-free";
    case Mode::kMinimaxQ: return "minimax-q";
  }
  return "?";
}

inline Mode parse_mode(const std::string& name) {
  for (Mode m : {Mode::kModelBased, Mode::kSelfBelief, Mode::kModelFree,
                 Mode::kMinimaxQ}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown mode \"" + name + "\"");
}

// Reference step-size sequences alpha_c = (1+c)^-ra and
// beta_c = (1+c)^-rb, optionally divided by log(2+c).
struct Schedule {
  double alpha_exponent = 0.5;
  double beta_exponent = 1.0;
  bool beta_log_damping = false;

  double alpha(std::uint64_t c) const {
    return std::pow(1.0 + static_cast<double>(c), -alpha_exponent);
  }

  double beta(std::uint64_t c) const {
    const double x = 1.0 + static_cast<double>(c);
    double b = std::pow(x, -beta_exponent);
    // 1/log(2) > 1, so the first damped steps are capped at a full step.
    if (beta_log_damping) b = std::min(1.0, b / std::log(1.0 + x));
    return b;
  }

  // Throws ConfigError naming the violated assumption.
  void validate(Mode mode) const {
    auto in_unit = [](double r) { return r > 0.0 && r <= 1.0; };
    if (!in_unit(alpha_exponent) || !in_unit(beta_exponent)) {
      throw ConfigError(
          "Assumption 1-b: step-size exponents must lie in (0, 1] so steps "
          "vanish but are not summable");
    }
    // Square-summability is checked first so model-free runs with a slow
    // beta report the sampled-update requirement.
    if ((mode == Mode::kModelFree || mode == Mode::kMinimaxQ) &&
        !(beta_exponent > 0.5)) {
      throw ConfigError(
          "Assumption 2-b: sum of squared beta must be finite (need beta "
          "exponent > 0.5)");
    }
    const bool two_timescale =
        beta_exponent > alpha_exponent ||
        (beta_exponent == 1.0 && alpha_exponent == 1.0 && beta_log_damping);
    if (!two_timescale) {
      throw ConfigError(
          "Assumption 1-c: beta/alpha must vanish (need beta exponent > alpha "
          "exponent, or both 1 with log damping)");
    }
  }
};

struct RunConfig {
  Mode mode = Mode::kModelBased;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  TieRule tie_rule = TieRule::kLowestIndex;
  std::uint64_t record_every = 1000;
  // Lyapunov constant; defaults to the midpoint of (1, 1/discount).
  std::optional<double> lambda;
  // Learners refuse general-sum games unless this is set.
  bool allow_general_sum = false;
  // Initial strategy beliefs; uniform when absent.
  std::optional<StrategyProfile> initial_strategies;
  // Initial Q-beliefs; the stage payoffs when absent.
  std::optional<QTable> initial_q;

  double resolved_lambda(double discount) const {
    if (lambda) return *lambda;
    return discount > 0.0 ? 0.5 * (1.0 + 1.0 / discount) : 2.0;
  }

  void validate(const GameSpec& spec) const {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
      throw ConfigError("epsilon must lie in [0, 1)");
    }
    if (record_every < 1) throw ConfigError("record_every must be >= 1");
    const double lam = resolved_lambda(spec.discount);
    const double upper =
        spec.discount > 0.0 ? 1.0 / spec.discount
                            : std::numeric_limits<double>::infinity();
    if (!(lam > 1.0 && lam < upper)) {
      throw ConfigError("lambda must lie in (1, 1/discount)");
    }
    if (!spec.zero_sum && !allow_general_sum) {
      throw ConfigError("learners require a zero-sum game");
    }
  }
};

struct JointAction {
  int a1 = 0;
  int a2 = 0;
  friend bool operator==(const JointAction&, const JointAction&) = default;
};

// The full state of the learning dynamics. Both players observe the same
// actions, so the belief about player i's strategy (held by its opponent)
// is stored once as strategy[i].
struct BeliefState {
  StrategyProfile strategy;
  QTable q;
  std::vector<std::uint64_t> state_visits;
  // Flattened [s][a1][a2].
  std::vector<std::uint64_t> state_action_visits;
  int n_actions_1 = 0;
  int n_actions_2 = 0;

  int n_states() const { return static_cast<int>(state_visits.size()); }

  std::uint64_t& visits(int s, int a1, int a2) {
    return state_action_visits[(static_cast<std::size_t>(s) * n_actions_1 +
                                a1) *
                                   n_actions_2 +
                               a2];
  }
  std::uint64_t visits(int s, int a1, int a2) const {
    return state_action_visits[(static_cast<std::size_t>(s) * n_actions_1 +
                                a1) *
                                   n_actions_2 +
                               a2];
  }
};

// Q-beliefs start at the stage payoffs.
inline BeliefState init_beliefs(
    const GameSpec& spec,
    const std::optional<StrategyProfile>& initial_strategies = std::nullopt) {
  BeliefState b;
  b.strategy = initial_strategies ? *initial_strategies
                                  : StrategyProfile::uniform(spec);
  detail::check_profile(spec, b.strategy);
  b.q = QTable::stage_payoffs(spec);
  b.n_actions_1 = spec.n_actions_1;
  b.n_actions_2 = spec.n_actions_2;
  b.state_visits.assign(spec.n_states, 0);
  b.state_action_visits.assign(static_cast<std::size_t>(spec.n_states) *
                                   spec.n_actions_1 * spec.n_actions_2,
                               0);
  return b;
}

enum class Estimator {
  // v_1(s) = max_a1 a1' Q_1 pi_2,  v_2(s) = max_a2 pi_1' Q_2 a2
  kBestResponse,
  // v_i(s) = pi_1' Q_i pi_2 (players hold beliefs on their own strategies)
  kSelfBelief,
};

inline double continuation_estimate(const BeliefState& b, int s, Player p,
                                    Estimator est) {
  const Matrix& q = b.q[p][s];
  const Vector& pi1 = b.strategy[Player::kOne][s];
  const Vector& pi2 = b.strategy[Player::kTwo][s];
  const auto rows = q.rows();
  const auto cols = q.cols();
  if (est == Estimator::kSelfBelief) {
    // Same summation order for both players keeps v_1 = -v_2 bit-exact
    // when Q_1 = -Q_2.
    double acc = 0.0;
    for (Eigen::Index m = 0; m < rows; ++m) {
      double row = 0.0;
      for (Eigen::Index n = 0; n < cols; ++n) row += q(m, n) * pi2(n);
      acc += pi1(m) * row;
    }
    return acc;
  }
  double best = -std::numeric_limits<double>::infinity();
  if (p == Player::kOne) {
    for (Eigen::Index m = 0; m < rows; ++m) {
      double acc = 0.0;
      for (Eigen::Index n = 0; n < cols; ++n) acc += q(m, n) * pi2(n);
      best = std::max(best, acc);
    }
  } else {
    for (Eigen::Index n = 0; n < cols; ++n) {
      double acc = 0.0;
      for (Eigen::Index m = 0; m < rows; ++m) acc += pi1(m) * q(m, n);
      best = std::max(best, acc);
    }
  }
  return best;
}

inline ValueVector continuation_estimates(const BeliefState& b,
                                          Estimator est = Estimator::kBestResponse) {
  ValueVector v;
  for (Player p : kPlayers) {
    v[p].resize(b.n_states());
    for (int s = 0; s < b.n_states(); ++s) {
      v[p](s) = continuation_estimate(b, s, p, est);
    }
  }
  return v;
}

// Minimax values val_i(Q_i,s) of the current Q-beliefs.
inline ValueVector minimax_estimates(const BeliefState& b) {
  ValueVector v;
  for (Player p : kPlayers) {
    v[p].resize(b.n_states());
    for (int s = 0; s < b.n_states(); ++s) {
      v[p](s) = minimax_value(p, b.q[p][s]);
    }
  }
  return v;
}

// Best responses to the beliefs; with probability epsilon each player
// independently plays a uniform random action instead.
inline JointAction select_actions(const BeliefState& b, int s, double epsilon,
                                  TieRule rule, Rng& exploration,
                                  Rng& tie_break) {
  JointAction out;
  const bool explore_1 = exploration.uniform() < epsilon;
  if (explore_1) {
    out.a1 = exploration.index(b.n_actions_1);
  } else {
    out.a1 = best_response_row(b.q[Player::kOne][s],
                               b.strategy[Player::kTwo][s], rule, &tie_break);
  }
  const bool explore_2 = exploration.uniform() < epsilon;
  if (explore_2) {
    out.a2 = exploration.index(b.n_actions_2);
  } else {
    out.a2 = best_response_col(b.q[Player::kTwo][s],
                               b.strategy[Player::kOne][s], rule, &tie_break);
  }
  return out;
}

inline void step_toward_action(Vector& belief, int action, double alpha) {
  for (Eigen::Index i = 0; i < belief.size(); ++i) {
    const double target = i == action ? 1.0 : 0.0;
    belief(i) += alpha * (target - belief(i));
  }
}

// pi_j,s <- pi_j,s + alpha_{c(s)} (e_{a_j} - pi_j,s) at the current state,
// with c(s) the visit count before this step.
inline void update_strategy_beliefs(BeliefState& b, int s, JointAction a,
                                    const Schedule& schedule) {
  const double alpha = schedule.alpha(b.state_visits[s]);
  step_toward_action(b.strategy[Player::kOne][s], a.a1, alpha);
  step_toward_action(b.strategy[Player::kTwo][s], a.a2, alpha);
}

// Every joint action at state s moves toward
// r_i(s,a) + discount * sum_s' continuation_i(s') p(s'|s,a)
// with step beta_{c(s)}. `continuation` must come from the beliefs as they
// stood at the start of the stage.
inline void update_q_model_based(BeliefState& b, const GameSpec& spec, int s,
                                 const Schedule& schedule,
                                 const ValueVector& continuation) {
  const double beta = schedule.beta(b.state_visits[s]);
  const double g = spec.discount;
  for (Player p : kPlayers) {
    Matrix& q = b.q[p][s];
    const Matrix& r = spec.payoff(p, s);
    const Vector& v = continuation[p];
    for (int a1 = 0; a1 < spec.n_actions_1; ++a1) {
      for (int a2 = 0; a2 < spec.n_actions_2; ++a2) {
        const auto row = spec.next_state_dist(s, a1, a2);
        double cont = 0.0;
        for (int t = 0; t < spec.n_states; ++t) cont += v(t) * row[t];
        q(a1, a2) += beta * (r(a1, a2) + g * cont - q(a1, a2));
      }
    }
  }
}

// Only the played entry moves, toward r_i + discount * continuation_i, with
// step beta_{c(s,a)} from the pre-step state-action counter.
inline void update_q_model_free(BeliefState& b, const GameSpec& spec, int s,
                                JointAction a, std::array<double, 2> payoffs,
                                std::array<double, 2> next_continuation,
                                const Schedule& schedule) {
  const double beta = schedule.beta(b.visits(s, a.a1, a.a2));
  for (Player p : kPlayers) {
    double& q = b.q[p][s](a.a1, a.a2);
    const int i = index_of(p);
    q += beta * (payoffs[i] + spec.discount * next_continuation[i] - q);
  }
}

// Minimax-Q baseline, model-based form: the continuation is val_i of the
// Q-beliefs at every successor.
inline void update_q_minimax_baseline(BeliefState& b, const GameSpec& spec,
                                      int s, const Schedule& schedule) {
  update_q_model_based(b, spec, s, schedule, minimax_estimates(b));
}

// Minimax-Q baseline, sampled form: one LP per player at the successor.
inline void update_q_minimax_baseline(BeliefState& b, const GameSpec& spec,
                                      int s, JointAction a,
                                      std::array<double, 2> payoffs,
                                      int next_state,
                                      const Schedule& schedule) {
  const std::array<double, 2> next = {
      minimax_value(Player::kOne, b.q[Player::kOne][next_state]),
      minimax_value(Player::kTwo, b.q[Player::kTwo][next_state])};
  update_q_model_free(b, spec, s, a, payoffs, next, schedule);
}

inline int sample_index(std::span<const double> dist, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    cum += dist[i];
    last_positive = static_cast<int>(i);
    if (u < cum) return last_positive;
  }
  return last_positive;
}

}  // namespace zsfp

#endif  // ZSFP_LEARNING_HPP
