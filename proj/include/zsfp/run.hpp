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

#ifndef ZSFP_RUN_HPP
#define ZSFP_RUN_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "zsfp/diagnostics.hpp"
#include "zsfp/learning.hpp"

namespace zsfp {

struct TraceRecord {
  std::uint64_t step = 0;
  int state = 0;
  // Absent on the final record, which is taken after the last update.
  std::optional<JointAction> action;
  DiagnosticsSnapshot diagnostics;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  BeliefState final_beliefs;
};

// Called after every stage with the number of completed stages.
using StepObserver = std::function<void(std::uint64_t, const BeliefState&)>;

// Simulates the learning dynamics for config.steps stages. Stage k: select
// actions, record (every record_every stages), sample s_{k+1}, update the
// strategy and Q beliefs from the beliefs at the start of the stage, then
// bump the visit counters. Deterministic given config.seed.
inline RunResult run(const GameSpec& spec, const RunConfig& config,
                     const Schedule& schedule,
                     const ShapleySolution* solution = nullptr,
                     const StepObserver& observer = {}) {
  require_valid(spec);
  config.validate(spec);
  schedule.validate(config.mode);

  RunResult out;
  out.final_beliefs = init_beliefs(spec, config.initial_strategies);
  if (config.initial_q) out.final_beliefs.q = *config.initial_q;
  if (config.steps == 0) return out;

  BeliefState& b = out.final_beliefs;
  const double lambda = config.resolved_lambda(spec.discount);
  Rng kernel(config.seed, Stream::kKernel);
  Rng exploration(config.seed, Stream::kExploration);
  Rng tie_break(config.seed, Stream::kTieBreak);

  const Estimator estimator = config.mode == Mode::kSelfBelief
                                  ? Estimator::kSelfBelief
                                  : Estimator::kBestResponse;
  ValueVector continuation;
  for (Player p : kPlayers) continuation[p].resize(spec.n_states);

  int s = sample_index(std::span<const double>(spec.initial_dist.data(),
                                               spec.initial_dist.size()),
                       kernel);
  for (std::uint64_t k = 0; k < config.steps; ++k) {
    const JointAction a = select_actions(b, s, config.epsilon,
                                         config.tie_rule, exploration,
                                         tie_break);
    if (k % config.record_every == 0) {
      out.trace.push_back({k, s, a, snapshot(b, spec, solution, lambda)});
    }
    const int next = sample_index(spec.next_state_dist(s, a.a1, a.a2), kernel);
    const std::array<double, 2> payoffs = {spec.payoff_1[s](a.a1, a.a2),
                                           spec.payoff_2[s](a.a1, a.a2)};

    switch (config.mode) {
      case Mode::kModelBased:
      case Mode::kSelfBelief:
        for (Player p : kPlayers) {
          for (int t = 0; t < spec.n_states; ++t) {
            continuation[p](t) = continuation_estimate(b, t, p, estimator);
          }
        }
        update_strategy_beliefs(b, s, a, schedule);
        update_q_model_based(b, spec, s, schedule, continuation);
        break;
      case Mode::kModelFree: {
        const std::array<double, 2> next_cont = {
            continuation_estimate(b, next, Player::kOne, estimator),
            continuation_estimate(b, next, Player::kTwo, estimator)};
        update_strategy_beliefs(b, s, a, schedule);
        update_q_model_free(b, spec, s, a, payoffs, next_cont, schedule);
        break;
      }
      case Mode::kMinimaxQ:
        // The strategy update does not touch Q, so the LP at the successor
        // still sees the start-of-stage beliefs.
        update_strategy_beliefs(b, s, a, schedule);
        update_q_minimax_baseline(b, spec, s, a, payoffs, next, schedule);
        break;
    }
    ++b.state_visits[s];
    ++b.visits(s, a.a1, a.a2);
    if (observer) observer(k + 1, b);
    s = next;
  }
  out.trace.push_back(
      {config.steps, s, std::nullopt, snapshot(b, spec, solution, lambda)});
  return out;
}

}  // namespace zsfp

#endif  // ZSFP_RUN_HPP
