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

// zsfp command-line front end: generate, solve, run, eval, plot.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "zsfp/zsfp.hpp"

namespace {

using namespace zsfp;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out.flush()) throw Error("cannot write " + path);
}

std::string one_line(std::string msg) {
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return msg;
}

struct GenerateArgs {
  int states = 1;
  int actions = 2;
  double gamma = 0.0;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

void do_generate(const GenerateArgs& a) {
  const GameSpec spec =
      generate_random_game(a.states, a.actions, a.gamma, a.scale, a.seed);
  write_file(a.out, save_spec(spec));
}

struct SolveArgs {
  std::string spec;
  double tol = 1e-9;
  int max_iters = 100000;
  std::string out;
};

void do_solve(const SolveArgs& a) {
  const GameSpec spec = load_spec(read_file(a.spec));
  const ShapleySolution sol = shapley_value_iteration(spec, a.tol, a.max_iters);
  write_file(a.out, save_solution(sol));
}

struct RunArgs {
  std::string spec;
  std::string mode = "model-based";
  std::uint64_t steps = 0;
  double alpha_exp = 0.5;
  double beta_exp = 1.0;
  bool beta_log_damping = false;
  std::uint64_t seed = 0;
  std::string seeds;
  double epsilon = 0.0;
  std::string tie_rule = "lowest";
  std::uint64_t record_every = 1000;
  std::optional<double> lambda;
  std::string solution;
  bool allow_general_sum = false;
  bool init_from_solution = false;
  std::string out;
};

// "a..b" inclusive.
std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    throw ConfigError("--seeds expects a..b, got \"" + text + "\"");
  }
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string sa = text.substr(0, dots), sb = text.substr(dots + 2);
    const auto lo = std::stoull(sa, &used_a);
    const auto hi = std::stoull(sb, &used_b);
    if (used_a != sa.size() || used_b != sb.size() || lo > hi) throw 0;
    std::vector<std::uint64_t> out;
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  } catch (...) {
    throw ConfigError("--seeds expects a..b with a <= b, got \"" + text + "\"");
  }
}

// t.csv -> t.seed3.csv
std::string seeded_path(const std::string& path, std::uint64_t seed) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string tag = ".seed" + std::to_string(seed);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + tag;
  }
  return path.substr(0, dot) + tag + path.substr(dot);
}

TieRule parse_tie_rule(const std::string& name) {
  if (name == "lowest") return TieRule::kLowestIndex;
  if (name == "uniform") return TieRule::kUniformRandom;
  throw ConfigError("unknown tie rule \"" + name + "\"");
}

TraceMeta run_meta(const GameSpec& spec, const RunConfig& c,
                   const Schedule& sch, const RunArgs& a) {
  return {
      {"mode", to_string(c.mode)},
      {"steps", std::to_string(c.steps)},
      {"seed", std::to_string(c.seed)},
      {"epsilon", format_real(c.epsilon)},
      {"tie_rule", a.tie_rule},
      {"record_every", std::to_string(c.record_every)},
      {"lambda", format_real(c.resolved_lambda(spec.discount))},
      {"alpha_exponent", format_real(sch.alpha_exponent)},
      {"beta_exponent", format_real(sch.beta_exponent)},
      {"beta_log_damping", sch.beta_log_damping ? "true" : "false"},
      {"allow_general_sum", c.allow_general_sum ? "true" : "false"},
      {"init_from_solution", a.init_from_solution ? "true" : "false"},
      {"n_states", std::to_string(spec.n_states)},
      {"n_actions_1", std::to_string(spec.n_actions_1)},
      {"n_actions_2", std::to_string(spec.n_actions_2)},
      {"discount", format_real(spec.discount)},
  };
}

void run_one(const GameSpec& spec, RunConfig config, const Schedule& schedule,
             const ShapleySolution* solution, const RunArgs& a,
             const std::string& out_path) {
  RunResult result = run(spec, config, schedule, solution);
  if (config.steps == 0) {
    // Nothing was simulated; emit the initial beliefs as a single record so
    // the trace can still be evaluated.
    config.validate(spec);
    Rng kernel(config.seed, Stream::kKernel);
    const int s0 = sample_index(std::span<const double>(spec.initial_dist.data(),
                                                        spec.initial_dist.size()),
                                kernel);
    result.trace.push_back({0, s0, std::nullopt,
                            snapshot(result.final_beliefs, spec, solution,
                                     config.resolved_lambda(spec.discount))});
  }
  std::ostringstream os;
  write_trace_csv(os, run_meta(spec, config, schedule, a), spec.n_states,
                  result.trace, solution != nullptr,
                  &result.final_beliefs.strategy);
  write_file(out_path, os.str());
}

void do_run(const RunArgs& a) {
  const GameSpec spec = load_spec(read_file(a.spec));
  std::optional<ShapleySolution> solution;
  if (!a.solution.empty()) solution = load_solution(read_file(a.solution), &spec);
  if (a.init_from_solution && !solution) {
    throw ConfigError("--init-from-solution requires --solution");
  }

  Schedule schedule;
  schedule.alpha_exponent = a.alpha_exp;
  schedule.beta_exponent = a.beta_exp;
  schedule.beta_log_damping = a.beta_log_damping;

  RunConfig config;
  config.mode = parse_mode(a.mode);
  config.steps = a.steps;
  config.seed = a.seed;
  config.epsilon = a.epsilon;
  config.tie_rule = parse_tie_rule(a.tie_rule);
  config.record_every = a.record_every;
  config.lambda = a.lambda;
  config.allow_general_sum = a.allow_general_sum;
  if (a.init_from_solution) {
    StrategyProfile pi;
    for (Player p : kPlayers) pi[p] = solution->equilibrium[p];
    config.initial_strategies = std::move(pi);
    QTable q;
    for (Player p : kPlayers) q[p] = solution->q_star[p];
    config.initial_q = std::move(q);
  }
  // Fail fast on configuration errors before any worker starts.
  require_valid(spec);
  config.validate(spec);
  schedule.validate(config.mode);

  const ShapleySolution* sol = solution ? &*solution : nullptr;
  if (a.seeds.empty()) {
    run_one(spec, config, schedule, sol, a, a.out);
    return;
  }
  const auto seeds = parse_seed_range(a.seeds);
  std::vector<std::string> errors(seeds.size());
  std::vector<std::thread> workers;
  workers.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        RunConfig c = config;
        c.seed = seeds[i];
        run_one(spec, c, schedule, sol, a, seeded_path(a.out, seeds[i]));
      } catch (const std::exception& e) {
        errors[i] = "seed " + std::to_string(seeds[i]) + ": " + e.what();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(e);
  }
}

struct EvalArgs {
  std::string spec;
  std::string trace;
  std::string solution;
  std::string json;
};

Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_trace_csv(in);
}

void do_eval(const EvalArgs& a) {
  const GameSpec spec = load_spec(read_file(a.spec));
  if (!a.solution.empty()) load_solution(read_file(a.solution), &spec);
  const EvalReport report = evaluate_trace(spec, load_trace(a.trace));
  std::cout << to_text(report);
  if (!a.json.empty()) write_file(a.json, to_json(report).dump(1) + "\n");
}

struct PlotArgs {
  std::string trace;
  std::string solution;
  std::string out;
};

void do_plot(const PlotArgs& a) {
  const Trace trace = load_trace(a.trace);
  std::optional<ShapleySolution> solution;
  if (!a.solution.empty()) {
    solution = load_solution(read_file(a.solution));
    if (solution->v_star[Player::kOne].size() != trace.n_states) {
      throw ValidationError("solution has " +
                            std::to_string(solution->v_star[Player::kOne].size()) +
                            " states, trace has " +
                            std::to_string(trace.n_states));
    }
  }
  write_file(a.out, render_svg(trace, solution ? &*solution : nullptr));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fictitious play for discounted zero-sum stochastic games"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a random zero-sum game spec");
  generate->add_option("--states", gen.states)->check(CLI::PositiveNumber);
  generate->add_option("--actions", gen.actions)->check(CLI::PositiveNumber);
  generate->add_option("--gamma", gen.gamma)->required();
  generate->add_option("--scale", gen.scale);
  generate->add_option("--seed", gen.seed)->envname("ZSFP_SEED");
  generate->add_option("--out", gen.out)->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Shapley value iteration");
  solve_cmd->add_option("--spec", solve.spec)->required();
  solve_cmd->add_option("--tol", solve.tol)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iters", solve.max_iters)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", solve.out)->required();

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "simulate the learning dynamics");
  run_cmd->add_option("--spec", ra.spec)->required();
  run_cmd->add_option("--mode", ra.mode,
                      "model-based, self-belief, model-free or minimax-q");
  run_cmd->add_option("--steps", ra.steps)->required();
  run_cmd->add_option("--alpha-exp", ra.alpha_exp);
  run_cmd->add_option("--beta-exp", ra.beta_exp);
  run_cmd->add_flag("--beta-log-damping", ra.beta_log_damping);
  auto* seed_opt = run_cmd->add_option("--seed", ra.seed)->envname("ZSFP_SEED");
  run_cmd->add_option("--seeds", ra.seeds, "inclusive range a..b, one file per seed")
      ->excludes(seed_opt);
  run_cmd->add_option("--epsilon", ra.epsilon);
  run_cmd->add_option("--tie-rule", ra.tie_rule, "lowest or uniform");
  run_cmd->add_option("--record-every", ra.record_every);
  run_cmd->add_option("--lambda", ra.lambda);
  run_cmd->add_option("--solution", ra.solution);
  run_cmd->add_flag("--allow-general-sum", ra.allow_general_sum);
  run_cmd->add_flag("--init-from-solution", ra.init_from_solution);
  run_cmd->add_option("--out", ra.out)->required();

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "summarize a trace");
  eval_cmd->add_option("--spec", ea.spec)->required();
  eval_cmd->add_option("--trace", ea.trace)->required();
  eval_cmd->add_option("--solution", ea.solution);
  eval_cmd->add_option("--json", ea.json, "also write the summary as JSON");

  PlotArgs pa;
  auto* plot_cmd = app.add_subcommand("plot", "render a trace as SVG");
  plot_cmd->add_option("--trace", pa.trace)->required();
  plot_cmd->add_option("--solution", pa.solution);
  plot_cmd->add_option("--out", pa.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (*generate) do_generate(gen);
    if (*solve_cmd) do_solve(solve);
    if (*run_cmd) do_run(ra);
    if (*eval_cmd) do_eval(ea);
    if (*plot_cmd) do_plot(pa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
