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

#ifndef ZSFP_GAME_IO_HPP
#define ZSFP_GAME_IO_HPP

#include <algorithm>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "zsfp/game.hpp"

namespace zsfp {

namespace detail {

using Json = nlohmann::json;

inline std::string line_context(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + byte, '\n');
  return "line " + std::to_string(line);
}

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(line_context(text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": " + e.what());
  }
}

inline const Json& require_field(const Json& doc, const char* field) {
  const auto it = doc.find(field);
  if (it == doc.end()) {
    throw ParseError(std::string("missing field \"") + field + "\"");
  }
  return *it;
}

inline void reject_unknown_fields(const Json& doc,
                                  const std::set<std::string>& known) {
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) {
      throw ParseError("unknown field \"" + key + "\"");
    }
  }
}

inline double as_real(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline int as_count(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < 1) throw ParseError(where + ": must be positive");
  return static_cast<int>(v);
}

inline const Json& as_array(const Json& j, std::size_t size,
                            const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  if (j.size() != size) {
    throw ParseError(where + ": expected " + std::to_string(size) +
                     " entries, got " + std::to_string(j.size()));
  }
  return j;
}

inline std::vector<Matrix> read_payoffs(const Json& j, int n_states, int rows,
                                        int cols, const std::string& field) {
  std::vector<Matrix> out;
  as_array(j, n_states, field);
  for (int s = 0; s < n_states; ++s) {
    const std::string ws = field + "[" + std::to_string(s) + "]";
    as_array(j[s], rows, ws);
    Matrix m(rows, cols);
    for (int a1 = 0; a1 < rows; ++a1) {
      const std::string wr = ws + "[" + std::to_string(a1) + "]";
      as_array(j[s][a1], cols, wr);
      for (int a2 = 0; a2 < cols; ++a2) {
        m(a1, a2) = as_real(j[s][a1][a2], wr + "[" + std::to_string(a2) + "]");
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

inline Json write_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json write_vector(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace detail

// Parses a game-spec document and validates it. Throws ParseError for
// schema problems and ValidationError for invariant violations.
inline GameSpec load_spec(std::string_view text) {
  using detail::as_array;
  const auto doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("game spec must be a JSON object");
  detail::reject_unknown_fields(
      doc, {"n_states", "n_actions_1", "n_actions_2", "discount", "zero_sum",
            "initial_dist", "payoff_1", "payoff_2", "transition"});

  GameSpec spec;
  spec.n_states = detail::as_count(detail::require_field(doc, "n_states"),
                                   "n_states");
  spec.n_actions_1 = detail::as_count(
      detail::require_field(doc, "n_actions_1"), "n_actions_1");
  spec.n_actions_2 = detail::as_count(
      detail::require_field(doc, "n_actions_2"), "n_actions_2");
  spec.discount =
      detail::as_real(detail::require_field(doc, "discount"), "discount");
  const auto& zs = detail::require_field(doc, "zero_sum");
  if (!zs.is_boolean()) throw ParseError("zero_sum: expected a boolean");
  spec.zero_sum = zs.get<bool>();

  const auto& p0 = as_array(detail::require_field(doc, "initial_dist"),
                            spec.n_states, "initial_dist");
  spec.initial_dist.resize(spec.n_states);
  for (int s = 0; s < spec.n_states; ++s) {
    spec.initial_dist(s) =
        detail::as_real(p0[s], "initial_dist[" + std::to_string(s) + "]");
  }

  spec.payoff_1 = detail::read_payoffs(detail::require_field(doc, "payoff_1"),
                                       spec.n_states, spec.n_actions_1,
                                       spec.n_actions_2, "payoff_1");
  if (doc.contains("payoff_2")) {
    spec.payoff_2 = detail::read_payoffs(doc["payoff_2"], spec.n_states,
                                         spec.n_actions_1, spec.n_actions_2,
                                         "payoff_2");
  } else if (spec.zero_sum) {
    for (const auto& m : spec.payoff_1) spec.payoff_2.push_back(-m);
  } else {
    throw ParseError(
        "missing field \"payoff_2\" (required when zero_sum is false)");
  }

  const auto& tr = as_array(detail::require_field(doc, "transition"),
                            spec.n_states, "transition");
  spec.transition.resize(static_cast<std::size_t>(spec.n_states) *
                         spec.n_actions_1 * spec.n_actions_2 * spec.n_states);
  for (int s = 0; s < spec.n_states; ++s) {
    const std::string ws = "transition[" + std::to_string(s) + "]";
    as_array(tr[s], spec.n_actions_1, ws);
    for (int a1 = 0; a1 < spec.n_actions_1; ++a1) {
      const std::string w1 = ws + "[" + std::to_string(a1) + "]";
      as_array(tr[s][a1], spec.n_actions_2, w1);
      for (int a2 = 0; a2 < spec.n_actions_2; ++a2) {
        const std::string w2 = w1 + "[" + std::to_string(a2) + "]";
        const auto& row = as_array(tr[s][a1][a2], spec.n_states, w2);
        auto dst = spec.next_state_dist(s, a1, a2);
        for (int t = 0; t < spec.n_states; ++t) {
          dst[t] = detail::as_real(row[t], w2 + "[" + std::to_string(t) + "]");
        }
      }
    }
  }

  require_valid(spec);
  return spec;
}

inline std::string save_spec(const GameSpec& spec) {
  detail::Json doc;
  doc["n_states"] = spec.n_states;
  doc["n_actions_1"] = spec.n_actions_1;
  doc["n_actions_2"] = spec.n_actions_2;
  doc["discount"] = spec.discount;
  doc["zero_sum"] = spec.zero_sum;
  doc["initial_dist"] = detail::write_vector(spec.initial_dist);
  auto payoffs = [](const std::vector<Matrix>& ms) {
    detail::Json out = detail::Json::array();
    for (const auto& m : ms) out.push_back(detail::write_matrix(m));
    return out;
  };
  doc["payoff_1"] = payoffs(spec.payoff_1);
  if (!spec.zero_sum) doc["payoff_2"] = payoffs(spec.payoff_2);

  detail::Json tr = detail::Json::array();
  for (int s = 0; s < spec.n_states; ++s) {
    detail::Json by_a1 = detail::Json::array();
    for (int a1 = 0; a1 < spec.n_actions_1; ++a1) {
      detail::Json by_a2 = detail::Json::array();
      for (int a2 = 0; a2 < spec.n_actions_2; ++a2) {
        const auto row = spec.next_state_dist(s, a1, a2);
        by_a2.push_back(detail::Json(std::vector<double>(row.begin(), row.end())));
      }
      by_a1.push_back(std::move(by_a2));
    }
    tr.push_back(std::move(by_a1));
  }
  doc["transition"] = std::move(tr);
  return doc.dump(1) + "\n";
}

}  // namespace zsfp

#endif  // ZSFP_GAME_IO_HPP
