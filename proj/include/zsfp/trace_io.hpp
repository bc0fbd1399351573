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

// Trace CSV layout:
//
//   # key=value               run configuration, one per line
//   k,s,a1,a2,vhat1_0,vhat2_0,vsum_0,defect_0,lyap_0,terr1_0,terr2_0,
//       qerr1_0,qerr2_0,vhat1_1,...          (nine columns per state)
//   <data rows>
//   # final_strategy_<i>,<s>,p_0,p_1,...   beliefs after the last stage
//
// Reals use 17 significant digits. terr/qerr cells are empty when the run
// had no Shapley solution; a1/a2 are empty on the final record.

#ifndef ZSFP_TRACE_IO_HPP
#define ZSFP_TRACE_IO_HPP

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zsfp/game_io.hpp"
#include "zsfp/run.hpp"

namespace zsfp {

using TraceMeta = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kStateColumns[] = {
    "vhat1", "vhat2", "vsum", "defect", "lyap",
    "terr1", "terr2", "qerr1", "qerr2"};
inline constexpr int kColumnsPerState = 9;

struct Trace {
  TraceMeta meta;
  int n_states = 0;
  std::vector<TraceRecord> records;
  std::optional<StrategyProfile> final_strategy;
  // Whether terr/qerr cells were filled.
  bool has_solution_columns = false;

  std::optional<std::string> meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

inline std::string trace_header_row(int n_states) {
  std::string out = "k,s,a1,a2";
  for (int s = 0; s < n_states; ++s) {
    for (const char* c : kStateColumns) {
      out += ",";
      out += c;
      out += "_" + std::to_string(s);
    }
  }
  return out;
}

inline void write_trace_csv(std::ostream& os, const TraceMeta& meta,
                            int n_states,
                            const std::vector<TraceRecord>& records,
                            bool with_solution,
                            const StrategyProfile* final_strategy) {
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
  os << trace_header_row(n_states) << "\n";
  auto cell = [&os](std::optional<double> x) {
    os << ",";
    if (x) os << format_real(*x);
  };
  for (const auto& r : records) {
    os << r.step << "," << r.state << ",";
    if (r.action) os << r.action->a1;
    os << ",";
    if (r.action) os << r.action->a2;
    for (const auto& d : r.diagnostics.states) {
      cell(d.v_hat_1);
      cell(d.v_hat_2);
      cell(d.v_sum);
      cell(d.zero_sum_defect);
      cell(d.lyapunov);
      if (with_solution) {
        cell(d.tracking_err_1);
        cell(d.tracking_err_2);
        cell(d.q_err_1);
        cell(d.q_err_2);
      } else {
        os << ",,,,";
      }
    }
    os << "\n";
  }
  if (final_strategy != nullptr) {
    for (Player p : kPlayers) {
      for (int s = 0; s < n_states; ++s) {
        os << "# final_strategy_" << index_of(p) + 1 << "," << s;
        const Vector& pi = (*final_strategy)[p][s];
        for (Eigen::Index a = 0; a < pi.size(); ++a) {
          os << "," << format_real(pi(a));
        }
        os << "\n";
      }
    }
  }
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline double parse_real(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": bad number \"" + s + "\"");
  }
}

inline long long parse_integer(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": bad integer \"" + s + "\"");
  }
}

}  // namespace detail

// Reads a trace written by write_trace_csv. The header row must match the
// fixed column set exactly.
inline Trace read_trace_csv(std::istream& is) {
  Trace trace;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<std::vector<std::pair<int, Vector>>> finals(2);
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line[0] == '#') {
      std::string body = line.substr(line[1] == ' ' ? 2 : 1);
      if (body.rfind("final_strategy_", 0) == 0) {
        const auto f = detail::split(body, ',');
        if (f.size() < 3) throw ParseError(where + ": bad final_strategy line");
        const int player = f[0] == "final_strategy_1" ? 0
                           : f[0] == "final_strategy_2" ? 1
                                                        : -1;
        if (player < 0) throw ParseError(where + ": bad final_strategy tag");
        const int s = static_cast<int>(detail::parse_integer(f[1], where));
        Vector pi(static_cast<Eigen::Index>(f.size() - 2));
        for (std::size_t i = 2; i < f.size(); ++i) {
          pi(static_cast<Eigen::Index>(i - 2)) = detail::parse_real(f[i], where);
        }
        finals[player].emplace_back(s, std::move(pi));
      } else if (!header_seen) {
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
          trace.meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
        }
      }
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (!header_seen) {
      if (fields.size() < 4 || (fields.size() - 4) % kColumnsPerState != 0) {
        throw ParseError(where + ": trace header has unexpected columns");
      }
      trace.n_states = static_cast<int>((fields.size() - 4) / kColumnsPerState);
      if (trace.n_states < 1 || line != trace_header_row(trace.n_states)) {
        throw ParseError(where + ": trace header has unexpected columns");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4 + std::size_t(kColumnsPerState) * trace.n_states) {
      throw ParseError(where + ": expected " +
                       std::to_string(4 + kColumnsPerState * trace.n_states) +
                       " fields, got " + std::to_string(fields.size()));
    }
    TraceRecord r;
    r.step = static_cast<std::uint64_t>(detail::parse_integer(fields[0], where));
    r.state = static_cast<int>(detail::parse_integer(fields[1], where));
    if (!fields[2].empty() || !fields[3].empty()) {
      r.action = JointAction{
          static_cast<int>(detail::parse_integer(fields[2], where)),
          static_cast<int>(detail::parse_integer(fields[3], where))};
    }
    auto opt = [&](const std::string& f) -> std::optional<double> {
      if (f.empty()) return std::nullopt;
      return detail::parse_real(f, where);
    };
    auto req = [&](const std::string& f) {
      if (f.empty()) throw ParseError(where + ": missing required value");
      return detail::parse_real(f, where);
    };
    r.diagnostics.states.resize(trace.n_states);
    for (int s = 0; s < trace.n_states; ++s) {
      const std::size_t base = 4 + std::size_t(kColumnsPerState) * s;
      auto& d = r.diagnostics.states[s];
      d.v_hat_1 = req(fields[base + 0]);
      d.v_hat_2 = req(fields[base + 1]);
      d.v_sum = req(fields[base + 2]);
      d.zero_sum_defect = req(fields[base + 3]);
      d.lyapunov = req(fields[base + 4]);
      const auto t1 = opt(fields[base + 5]);
      const auto t2 = opt(fields[base + 6]);
      d.tracking_err_1 = t1.value_or(std::nan(""));
      d.tracking_err_2 = t2.value_or(std::nan(""));
      d.q_err_1 = opt(fields[base + 7]);
      d.q_err_2 = opt(fields[base + 8]);
      if (t1) trace.has_solution_columns = true;
    }
    trace.records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError("trace has no header row");

  if (!finals[0].empty() || !finals[1].empty()) {
    StrategyProfile profile;
    for (int p = 0; p < 2; ++p) {
      profile.by_player[p].resize(trace.n_states);
      if (finals[p].size() != std::size_t(trace.n_states)) {
        throw ParseError("final_strategy lines do not cover every state");
      }
      for (auto& [s, pi] : finals[p]) {
        if (s < 0 || s >= trace.n_states) {
          throw ParseError("final_strategy state out of range");
        }
        profile.by_player[p][s] = std::move(pi);
      }
    }
    trace.final_strategy = std::move(profile);
  }
  return trace;
}

// Solution document:
// { "v_star": [[v per state] per player], "q_star": [player][s][a1][a2],
//   "equilibrium": [player][s][a], "residual": real, "iterations": int }
inline std::string save_solution(const ShapleySolution& sol) {
  using detail::Json;
  Json doc;
  Json v = Json::array();
  Json q = Json::array();
  Json eq = Json::array();
  for (Player p : kPlayers) {
    v.push_back(detail::write_vector(sol.v_star[p]));
    Json qs = Json::array();
    for (const auto& m : sol.q_star[p]) qs.push_back(detail::write_matrix(m));
    q.push_back(std::move(qs));
    Json es = Json::array();
    for (const auto& pi : sol.equilibrium[p]) {
      es.push_back(detail::write_vector(pi));
    }
    eq.push_back(std::move(es));
  }
  doc["v_star"] = std::move(v);
  doc["q_star"] = std::move(q);
  doc["equilibrium"] = std::move(eq);
  doc["residual"] = sol.residual;
  doc["iterations"] = sol.iterations;
  return doc.dump(1) + "\n";
}

// Dimensions come from the document; when `spec` is given they must match.
inline ShapleySolution load_solution(std::string_view text,
                                     const GameSpec* spec = nullptr) {
  using detail::as_array;
  using detail::Json;
  const auto doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("solution must be a JSON object");
  detail::reject_unknown_fields(
      doc, {"v_star", "q_star", "equilibrium", "residual", "iterations"});
  ShapleySolution sol;
  const auto& v = as_array(detail::require_field(doc, "v_star"), 2, "v_star");
  const auto& q = as_array(detail::require_field(doc, "q_star"), 2, "q_star");
  const auto& eq =
      as_array(detail::require_field(doc, "equilibrium"), 2, "equilibrium");
  if (!v[0].is_array() || !q[0].is_array() || q[0].empty() ||
      !q[0][0].is_array() || q[0][0].empty() || !q[0][0][0].is_array()) {
    throw ParseError("q_star: expected [player][s][a1][a2] arrays");
  }
  GameSpec dims;
  dims.n_states = static_cast<int>(v[0].size());
  dims.n_actions_1 = static_cast<int>(q[0][0].size());
  dims.n_actions_2 = static_cast<int>(q[0][0][0].size());
  if (spec != nullptr &&
      (spec->n_states != dims.n_states ||
       spec->n_actions_1 != dims.n_actions_1 ||
       spec->n_actions_2 != dims.n_actions_2)) {
    throw ValidationError("solution dimensions do not match the game spec");
  }
  for (Player p : kPlayers) {
    const int i = index_of(p);
    const std::string pi_tag = "[" + std::to_string(i) + "]";
    as_array(v[i], dims.n_states, "v_star" + pi_tag);
    sol.v_star[p].resize(dims.n_states);
    for (int s = 0; s < dims.n_states; ++s) {
      sol.v_star[p](s) = detail::as_real(v[i][s], "v_star" + pi_tag);
    }
    sol.q_star[p] = detail::read_payoffs(q[i], dims.n_states, dims.n_actions_1,
                                         dims.n_actions_2, "q_star" + pi_tag);
    as_array(eq[i], dims.n_states, "equilibrium" + pi_tag);
    const int n = dims.n_actions(p);
    for (int s = 0; s < dims.n_states; ++s) {
      as_array(eq[i][s], n, "equilibrium" + pi_tag);
      Vector pi(n);
      for (int a = 0; a < n; ++a) {
        pi(a) = detail::as_real(eq[i][s][a], "equilibrium" + pi_tag);
      }
      sol.equilibrium[p].push_back(std::move(pi));
    }
  }
  sol.residual =
      detail::as_real(detail::require_field(doc, "residual"), "residual");
  const auto& it = detail::require_field(doc, "iterations");
  if (!it.is_number_integer()) throw ParseError("iterations: expected an integer");
  sol.iterations = it.get<int>();
  sol.degenerate.resize(dims.n_states);
  for (int s = 0; s < dims.n_states; ++s) {
    sol.degenerate[s] = minimax_solve(sol.q_star[Player::kOne][s]).degenerate;
  }
  return sol;
}

}  // namespace zsfp

#endif  // ZSFP_TRACE_IO_HPP
