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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.
//
// usage: zsfp_acceptance <path to zsfp executable>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "zsfp/zsfp.hpp"

namespace {

using namespace zsfp;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome shapley_contraction_and_fixed_point() {
  Outcome out;
  const auto t0 = Clock::now();
  testing::Engine eng(101);
  const double discounts[] = {0.5, 0.8, 0.95};
  double worst_excess = -1e300, worst_residual = 0, worst_vsum = 0, worst_expl = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 5;
    const int m = 1 + (i / 5) % 4;
    const double g = discounts[i % 3];
    const GameSpec spec = generate_random_game(n, m, g, 1.0, 1000 + i);
    for (int k = 0; k < 100; ++k) {
      std::vector<Matrix> q, q2;
      for (int s = 0; s < n; ++s) {
        q.push_back(testing::random_matrix(eng, m, m, -5, 5));
        q2.push_back(testing::random_matrix(eng, m, m, -5, 5));
      }
      const double rhs = g * sup_distance(q, q2);
      for (Player p : kPlayers) {
        const double lhs = sup_distance(shapley_operator(spec, q, p),
                                        shapley_operator(spec, q2, p));
        worst_excess = std::max(worst_excess, lhs - rhs);
      }
    }
    const auto sol = shapley_value_iteration(spec, 1e-9);
    worst_residual = std::max(worst_residual, sol.residual);
    for (int s = 0; s < n; ++s) {
      worst_vsum = std::max(worst_vsum, std::abs(sol.v_star[Player::kOne](s) +
                                                 sol.v_star[Player::kTwo](s)));
    }
    worst_expl = std::max(worst_expl, exploitability(spec, sol.equilibrium).value);
  }
  const double t = seconds_since(t0);
  out.require(worst_excess <= 1e-9, "contraction excess max " + num(worst_excess) + " <= 1e-9");
  out.require(worst_residual <= 1e-9, "residual max " + num(worst_residual) + " <= 1e-9");
  out.require(worst_vsum <= 1e-8, "|v1*+v2*| max " + num(worst_vsum) + " <= 1e-8");
  out.require(worst_expl <= 1e-6, "equilibrium exploitability max " + num(worst_expl) + " <= 1e-6");
  out.require(t < 60, "runtime " + num(t) + " s < 60 s");
  return out;
}

Outcome minimax_oracle_equivalence() {
  Outcome out;
  const auto t0 = Clock::now();
  testing::Engine eng(202);
  std::uniform_int_distribution<int> size(1, 3);
  double worst_grid = 0.0;
  bool grid_below = true;
  for (int i = 0; i < 1000; ++i) {
    const Matrix m = testing::random_int_matrix(eng, size(eng), size(eng), -3, 3);
    const double lp = minimax_solve(m).value;
    const double grid = testing::grid_minimax_value(m, 1e-3);
    grid_below &= grid <= lp + 1e-9;
    worst_grid = std::max(worst_grid, std::abs(lp - grid));
  }
  double worst_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Matrix m = testing::random_matrix(eng, 6, 6, -10, 10);
    const auto sol = minimax_solve(m);
    const double concede = (m * sol.col_strategy).maxCoeff();
    const double guarantee = (sol.row_strategy.transpose() * m).minCoeff();
    worst_gap = std::max(worst_gap, concede - guarantee);
  }
  const double t = seconds_since(t0);
  out.require(worst_grid <= 6e-3, "|LP - grid| max " + num(worst_grid) + " <= 6e-3");
  out.require(grid_below, "grid value never exceeds the LP value");
  out.require(worst_gap <= 1e-9, "6x6 duality gap max " + num(worst_gap) + " <= 1e-9");
  out.require(t < 60, "runtime " + num(t) + " s < 60 s");
  return out;
}

// Shared by the learning criteria.
struct LearningRun {
  double v_sum = 0, q_err = 0, tracking = 0, exploit = 0;
  double defect_final = 0, defect_peak = 0;
  double lyap_final = 0, lyap_peak = 0;
  double q_bound_excess = -1e300;  // max_s |Q_i,s| - bound
  double zero_sum_worst = 0;       // max_s |Q_1,s + Q_2,s| over all steps
  double seconds = 0;
};

LearningRun learn(const GameSpec& spec, Mode mode, std::uint64_t steps,
                  double epsilon, std::uint64_t seed, bool track_zero_sum) {
  LearningRun r;
  const auto t0 = Clock::now();
  const auto sol = shapley_value_iteration(spec, 1e-12);
  RunConfig c;
  c.mode = mode;
  c.steps = steps;
  c.seed = seed;
  c.epsilon = epsilon;
  c.record_every = 1000;
  const Schedule sch{0.5, 1.0, false};
  const double bound =
      std::max(spec.max_abs_payoff(Player::kOne), spec.max_abs_payoff(Player::kTwo)) /
      (1.0 - spec.discount);
  const auto result = run(spec, c, sch, &sol, [&](std::uint64_t, const BeliefState& b) {
    for (int s = 0; s < spec.n_states; ++s) {
      const Matrix& q1 = b.q[Player::kOne][s];
      const Matrix& q2 = b.q[Player::kTwo][s];
      r.q_bound_excess = std::max(
          r.q_bound_excess,
          std::max(q1.cwiseAbs().maxCoeff(), q2.cwiseAbs().maxCoeff()) - bound);
      if (track_zero_sum) {
        r.zero_sum_worst = std::max(r.zero_sum_worst, (q1 + q2).cwiseAbs().maxCoeff());
      }
    }
  });
  for (const auto& rec : result.trace) {
    double defect = 0, lyap = 0;
    for (const auto& d : rec.diagnostics.states) {
      defect = std::max(defect, d.zero_sum_defect);
      lyap += d.lyapunov;
    }
    lyap /= spec.n_states;
    r.defect_peak = std::max(r.defect_peak, defect);
    r.lyap_peak = std::max(r.lyap_peak, lyap);
    r.defect_final = defect;
    r.lyap_final = lyap;
  }
  for (const auto& d : result.trace.back().diagnostics.states) {
    r.v_sum = std::max(r.v_sum, std::abs(d.v_sum));
    r.q_err = std::max({r.q_err, *d.q_err_1, *d.q_err_2});
    r.tracking = std::max({r.tracking, std::abs(d.tracking_err_1), std::abs(d.tracking_err_2)});
  }
  r.exploit = exploitability(spec, result.final_beliefs.strategy).value;
  r.seconds = seconds_since(t0);
  return r;
}

struct Tolerances {
  double v_sum, q_err, tracking, exploit, defect_ratio;
};

void check_learning(Outcome& out, const std::vector<LearningRun>& runs,
                    const Tolerances& tol) {
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const std::string tag = "seed " + std::to_string(i + 1) + ": ";
    out.require(r.v_sum <= tol.v_sum, tag + "max|v1+v2| " + num(r.v_sum) + " <= " + num(tol.v_sum));
    out.require(r.q_err <= tol.q_err, tag + "q_err " + num(r.q_err) + " <= " + num(tol.q_err));
    out.require(r.tracking <= tol.tracking,
                tag + "|tracking_err| " + num(r.tracking) + " <= " + num(tol.tracking));
    out.require(r.exploit <= tol.exploit,
                tag + "exploitability " + num(r.exploit) + " <= " + num(tol.exploit));
    out.require(r.defect_final <= tol.defect_ratio * r.defect_peak,
                tag + "defect final " + num(r.defect_final) + " <= " + num(tol.defect_ratio) +
                    " x peak " + num(r.defect_peak));
    out.info(tag + "runtime " + num(r.seconds) + " s");
  }
}

// ---------------------------------------------------------------------------

struct CliRunner {
  std::string exe;
  fs::path dir;

  int operator()(const std::string& args) const {
    const std::string cmd = "cd '" + dir.string() + "' && '" + exe + "' " + args +
                            " > /dev/null 2> err.txt";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::string file(const std::string& name) const {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

Outcome determinism(const std::string& exe) {
  Outcome out;
  CliRunner cli{exe, fs::current_path() / "acceptance_determinism"};
  fs::remove_all(cli.dir);
  fs::create_directories(cli.dir);
  const std::vector<std::pair<std::string, std::vector<std::string>>> steps = {
      {"generate --states 3 --actions 4 --gamma 0.8 --seed 7 --out g%.json", {"g%.json"}},
      {"solve --spec g1.json --out s%.json", {"s%.json"}},
      {"run --spec g1.json --mode model-based --steps 200000 --seed 1 --record-every 100 "
       "--solution s1.json --out mb%.csv",
       {"mb%.csv"}},
      {"run --spec g1.json --mode model-free --epsilon 0.02 --tie-rule uniform --steps 200000 "
       "--seed 3 --solution s1.json --out mf%.csv",
       {"mf%.csv"}},
      {"run --spec g1.json --steps 50000 --seeds 1..3 --out par%.csv",
       {"par%.seed1.csv", "par%.seed2.csv", "par%.seed3.csv"}},
      {"plot --trace mb1.csv --solution s1.json --out p%.svg", {"p%.svg"}},
  };
  auto fill = [](std::string s, int k) {
    for (auto p = s.find('%'); p != std::string::npos; p = s.find('%')) {
      s.replace(p, 1, std::to_string(k));
    }
    return s;
  };
  for (const auto& [args, files] : steps) {
    bool ran = true;
    for (int k = 1; k <= 2; ++k) ran &= cli(fill(args, k)) == 0;
    if (!ran) {
      out.require(false, "command failed: " + fill(args, 1) + ": " + cli.file("err.txt"));
      continue;
    }
    for (const auto& f : files) {
      const std::string a = cli.file(fill(f, 1)), b = cli.file(fill(f, 2));
      out.require(!a.empty() && a == b, fill(f, 1) + " and " + fill(f, 2) + " byte-identical");
    }
  }
  fs::remove_all(cli.dir);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: zsfp_acceptance <zsfp executable>\n";
    return 2;
  }
  const std::string exe = fs::absolute(argv[1]).string();

  struct Criterion {
    int id;
    std::string name;
    Outcome outcome;
  };
  std::vector<Criterion> results;
  auto report = [&results](int id, const std::string& name, Outcome o) {
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << ": " << name
              << std::endl;
    results.push_back({id, name, std::move(o)});
  };

  report(1, "Shapley contraction and fixed point", shapley_contraction_and_fixed_point());
  report(2, "minimax LP matches grid oracle; duality gap", minimax_oracle_equivalence());

  // The desk-scale configuration: 3 states, 4 actions, discount 0.8,
  // payoff scale 1; seed k drives both the game generator and the run.
  std::vector<GameSpec> games;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    games.push_back(generate_random_game(3, 4, 0.8, 1.0, seed));
  }
  std::vector<LearningRun> mb, mf;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    mb.push_back(learn(games[seed - 1], Mode::kModelBased, 1000000, 0.0, seed, false));
  }
  {
    Outcome o;
    check_learning(o, mb, {0.05, 0.1, 0.05, 0.1, 0.1});
    report(3, "model-based learning, 5 seeds x 1e6 steps", std::move(o));
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    mf.push_back(learn(games[seed - 1], Mode::kModelFree, 5000000, 0.02, seed, false));
  }
  {
    Outcome o;
    check_learning(o, mf, {0.1, 0.2, 0.1, 0.2, 0.2});
    report(4, "model-free learning, epsilon 0.02, 5 seeds x 5e6 steps", std::move(o));
  }
  const LearningRun sb = learn(games[0], Mode::kSelfBelief, 1000000, 0.0, 1, true);
  {
    Outcome o;
    o.require(sb.zero_sum_worst <= 1e-12,
              "max |Q1+Q2| over all steps " + num(sb.zero_sum_worst) + " <= 1e-12");
    report(5, "self-belief variant stays exactly zero-sum", std::move(o));
  }
  {
    Outcome o;
    double worst = sb.q_bound_excess;
    for (const auto& r : mb) worst = std::max(worst, r.q_bound_excess);
    for (const auto& r : mf) worst = std::max(worst, r.q_bound_excess);
    o.require(worst <= 1e-9, "max_s |Q_i,s| - max_s |R_i,s|/(1-discount) = " + num(worst) +
                                 " <= 1e-9 over 11 runs");
    report(6, "Q-beliefs stay bounded", std::move(o));
  }
  {
    Outcome o;
    for (std::size_t i = 0; i < mb.size(); ++i) {
      const auto& r = mb[i];
      const std::string tag = "seed " + std::to_string(i + 1) + ": ";
      o.require(r.lyap_final <= 0.05, tag + "mean V final " + num(r.lyap_final) + " <= 0.05");
      o.require(r.lyap_final <= 0.1 * r.lyap_peak,
                tag + "mean V final " + num(r.lyap_final) + " <= 0.1 x max " + num(r.lyap_peak));
    }
    report(7, "Lyapunov value decreases", std::move(o));
  }
  {
    Outcome o;
    std::vector<GameSpec> static_games = {matching_pennies(0.0)};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      static_games.push_back(generate_random_game(3, 4, 0.0, 1.0, seed));
    }
    for (std::size_t i = 0; i < static_games.size(); ++i) {
      const GameSpec& g = static_games[i];
      RunConfig c;
      c.steps = 100000;
      c.seed = i + 1;
      bool moved = false;
      run(g, c, Schedule{}, nullptr, [&](std::uint64_t, const BeliefState& b) {
        for (Player p : kPlayers) {
          for (int s = 0; s < g.n_states; ++s) moved |= b.q[p][s] != g.payoff(p, s);
        }
      });
      o.require(!moved, "discount 0 game " + std::to_string(i) + ": Q-beliefs equal payoffs at every step");
    }
    for (double g : {0.0, 0.5, 0.8}) {
      RunConfig c;
      c.steps = 100000;
      c.seed = 1;
      const auto r = run(matching_pennies(g), c, Schedule{});
      const auto& d = r.trace.back().diagnostics.states[0];
      const double dev = std::max(std::abs(d.v_hat_1), std::abs(d.v_hat_2));
      const std::string line = "matching pennies, discount " + num(g) +
                               ", 1e5 steps: max|v_hat| " + num(dev);
      if (g == 0.0) {
        o.require(dev <= 0.02, line + " <= 0.02");
      } else {
        o.info(line);
      }
    }
    report(8, "exact degenerate cases", std::move(o));
  }
  {
    Outcome o;
    testing::Engine eng(909);
    const double discounts[] = {0.5, 0.8, 0.9};
    int within = 0;
    double worst_z = 0;
    for (int i = 0; i < 20; ++i) {
      const GameSpec spec = testing::random_zero_sum_game(eng, 1 + i % 5, 1 + i % 4,
                                                          1 + (i / 4) % 4, discounts[i % 3]);
      const auto pi = testing::random_profile(eng, spec);
      const double exact = utility(spec, pi)[0];
      const auto mc = testing::rollout_utility(spec, pi, 100000, eng);
      // Truncating at discount^H <= 1e-6 biases the rollout by at most
      // 1e-6 * max|R| / (1 - discount); deterministic games have zero spread.
      const double bias = 1e-6 * spec.max_abs_payoff(Player::kOne) / (1.0 - spec.discount);
      const double excess = std::max(0.0, std::abs(mc.mean - exact) - bias);
      const double z = mc.std_error > 0.0 ? excess / mc.std_error
                                          : (excess > 1e-12 ? HUGE_VAL : 0.0);
      worst_z = std::max(worst_z, z);
      within += z <= 3.0;
    }
    o.require(within == 20, std::to_string(within) +
                                "/20 within 3 standard errors plus truncation bias (worst " +
                                num(worst_z) + " SE)");
    report(9, "policy evaluation matches Monte Carlo", std::move(o));
  }
  report(10, "CLI outputs are byte-identical across invocations", determinism(exe));

  int failed = 0;
  std::cout << "\nsummary:\n";
  for (const auto& r : results) {
    std::cout << "  " << (r.outcome.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name
              << "\n";
    failed += !r.outcome.pass;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
