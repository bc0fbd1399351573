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

#ifndef ZSFP_DIAGNOSTICS_HPP
#define ZSFP_DIAGNOSTICS_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zsfp/learning.hpp"
#include "zsfp/matrix_game.hpp"
#include "zsfp/planning.hpp"

namespace zsfp {

// max(0, h1 + h2 - lambda * ||q1 + q2||_max) with
// h1 = max_a1 a1' q1 pi2 and h2 = max_a2 pi1' q2 a2.
inline double lyapunov_value(const Matrix& q1, const Matrix& q2,
                             const Vector& pi1, const Vector& pi2,
                             double lambda) {
  if (q1.rows() != q2.rows() || q1.cols() != q2.cols() ||
      pi1.size() != q1.rows() || pi2.size() != q1.cols()) {
    throw std::invalid_argument("lyapunov_value: dimension mismatch");
  }
  const double h1 = (q1 * pi2).maxCoeff();
  const double h2 = (pi1.transpose() * q2).maxCoeff();
  const double defect = (q1 + q2).cwiseAbs().maxCoeff();
  return std::max(0.0, h1 + h2 - lambda * defect);
}

// v_i(s) - val_i(Q_i,s).
inline double tracking_error(const BeliefState& b, int s, Player p) {
  return continuation_estimate(b, s, p, Estimator::kBestResponse) -
         minimax_value(p, b.q[p][s]);
}

struct StateDiagnostics {
  double v_hat_1 = 0.0;
  double v_hat_2 = 0.0;
  double v_sum = 0.0;
  double zero_sum_defect = 0.0;
  double lyapunov = 0.0;
  double tracking_err_1 = 0.0;
  double tracking_err_2 = 0.0;
  // Present only when a Shapley solution was supplied.
  std::optional<double> q_err_1;
  std::optional<double> q_err_2;
  std::optional<double> strategy_err;
  // The equilibrium at this state is not unique, so strategy_err compares
  // against one of several optima.
  bool strategy_err_informational = false;
};

struct DiagnosticsSnapshot {
  std::vector<StateDiagnostics> states;
};

inline DiagnosticsSnapshot snapshot(const BeliefState& b, const GameSpec& spec,
                                    const ShapleySolution* solution,
                                    double lambda) {
  DiagnosticsSnapshot out;
  out.states.resize(spec.n_states);
  for (int s = 0; s < spec.n_states; ++s) {
    auto& d = out.states[s];
    const Matrix& q1 = b.q[Player::kOne][s];
    const Matrix& q2 = b.q[Player::kTwo][s];
    const Vector& pi1 = b.strategy[Player::kOne][s];
    const Vector& pi2 = b.strategy[Player::kTwo][s];
    d.v_hat_1 = continuation_estimate(b, s, Player::kOne,
                                      Estimator::kBestResponse);
    d.v_hat_2 = continuation_estimate(b, s, Player::kTwo,
                                      Estimator::kBestResponse);
    d.v_sum = d.v_hat_1 + d.v_hat_2;
    d.zero_sum_defect = (q1 + q2).cwiseAbs().maxCoeff();
    d.lyapunov = lyapunov_value(q1, q2, pi1, pi2, lambda);
    d.tracking_err_1 = d.v_hat_1 - minimax_value(Player::kOne, q1);
    d.tracking_err_2 = d.v_hat_2 - minimax_value(Player::kTwo, q2);
    if (solution != nullptr) {
      d.q_err_1 =
          (q1 - solution->q_star[Player::kOne][s]).cwiseAbs().maxCoeff();
      d.q_err_2 =
          (q2 - solution->q_star[Player::kTwo][s]).cwiseAbs().maxCoeff();
      d.strategy_err =
          (pi1 - solution->equilibrium[Player::kOne][s]).lpNorm<1>() +
          (pi2 - solution->equilibrium[Player::kTwo][s]).lpNorm<1>();
      d.strategy_err_informational = solution->degenerate[s];
    }
  }
  return out;
}

}  // namespace zsfp

#endif  // ZSFP_DIAGNOSTICS_HPP
