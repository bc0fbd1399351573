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

#ifndef ZSFP_EVALUATION_HPP
#define ZSFP_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "zsfp/planning.hpp"
#include "zsfp/trace_io.hpp"

namespace zsfp {

// One scalar convergence metric summarized over a trace.
struct MetricSummary {
  // Max over the first and final 10% of records, and over all records.
  double initial = 0.0;
  double final_window = 0.0;
  double peak = 0.0;
  // Value at the last record.
  double last = 0.0;

  std::optional<double> final_over_initial() const {
    if (initial > 0.0) return final_window / initial;
    return std::nullopt;
  }
  std::optional<double> final_over_peak() const {
    if (peak > 0.0) return final_window / peak;
    return std::nullopt;
  }
};

struct EvalReport {
  std::size_t records = 0;
  std::size_t window = 0;
  MetricSummary v_sum;            // max_s |v_hat_1 + v_hat_2|
  MetricSummary zero_sum_defect;  // max_s ||Q_1 + Q_2||_max
  MetricSummary lyapunov;         // mean_s V
  std::optional<MetricSummary> tracking_err;  // max_{i,s} |terr|
  std::optional<MetricSummary> q_err;         // max_{i,s} qerr
  std::optional<double> exploitability;       // of the final beliefs
};

namespace detail {

inline MetricSummary summarize(
    const std::vector<TraceRecord>& records, std::size_t window,
    const std::function<double(const DiagnosticsSnapshot&)>& metric) {
  MetricSummary m;
  const std::size_t n = records.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = metric(records[i].diagnostics);
    m.peak = i == 0 ? x : std::max(m.peak, x);
    if (i < window) m.initial = i == 0 ? x : std::max(m.initial, x);
    if (i >= n - window) {
      m.final_window = i == n - window ? x : std::max(m.final_window, x);
    }
    m.last = x;
  }
  return m;
}

}  // namespace detail

inline EvalReport evaluate_trace(const GameSpec& spec, const Trace& trace) {
  if (trace.records.empty()) throw Error("trace has no records");
  if (trace.n_states != spec.n_states) {
    throw ValidationError("trace has " + std::to_string(trace.n_states) +
                          " states, spec has " +
                          std::to_string(spec.n_states));
  }
  EvalReport r;
  r.records = trace.records.size();
  r.window = std::max<std::size_t>(1, (r.records + 9) / 10);

  r.v_sum = detail::summarize(trace.records, r.window, [](const auto& snap) {
    double m = 0.0;
    for (const auto& d : snap.states) m = std::max(m, std::abs(d.v_sum));
    return m;
  });
  r.zero_sum_defect =
      detail::summarize(trace.records, r.window, [](const auto& snap) {
        double m = 0.0;
        for (const auto& d : snap.states) m = std::max(m, d.zero_sum_defect);
        return m;
      });
  r.lyapunov = detail::summarize(trace.records, r.window, [](const auto& snap) {
    double sum = 0.0;
    for (const auto& d : snap.states) sum += d.lyapunov;
    return sum / static_cast<double>(snap.states.size());
  });
  if (trace.has_solution_columns) {
    r.tracking_err =
        detail::summarize(trace.records, r.window, [](const auto& snap) {
          double m = 0.0;
          for (const auto& d : snap.states) {
            m = std::max({m, std::abs(d.tracking_err_1),
                          std::abs(d.tracking_err_2)});
          }
          return m;
        });
    r.q_err = detail::summarize(trace.records, r.window, [](const auto& snap) {
      double m = 0.0;
      for (const auto& d : snap.states) {
        m = std::max({m, d.q_err_1.value_or(0.0), d.q_err_2.value_or(0.0)});
      }
      return m;
    });
  }
  if (trace.final_strategy) {
    detail::check_profile(spec, *trace.final_strategy);
    r.exploitability = exploitability(spec, *trace.final_strategy).value;
  }
  return r;
}

inline nlohmann::json to_json(const MetricSummary& m) {
  nlohmann::json j;
  j["initial"] = m.initial;
  j["final"] = m.final_window;
  j["peak"] = m.peak;
  j["last"] = m.last;
  const auto fi = m.final_over_initial();
  const auto fp = m.final_over_peak();
  j["final_over_initial"] = fi ? nlohmann::json(*fi) : nlohmann::json();
  j["final_over_peak"] = fp ? nlohmann::json(*fp) : nlohmann::json();
  return j;
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["records"] = r.records;
  j["window"] = r.window;
  j["v_sum"] = to_json(r.v_sum);
  j["zero_sum_defect"] = to_json(r.zero_sum_defect);
  j["lyapunov"] = to_json(r.lyapunov);
  j["tracking_err"] = r.tracking_err ? to_json(*r.tracking_err) : nlohmann::json();
  j["q_err"] = r.q_err ? to_json(*r.q_err) : nlohmann::json();
  j["exploitability"] =
      r.exploitability ? nlohmann::json(*r.exploitability) : nlohmann::json();
  return j;
}

inline std::string to_text(const EvalReport& r) {
  std::ostringstream os;
  os << "records " << r.records << " (final window " << r.window << ")\n";
  auto line = [&os](const char* name, const MetricSummary& m) {
    os << name << " final " << format_real(m.final_window) << " initial "
       << format_real(m.initial) << " peak " << format_real(m.peak);
    if (const auto ratio = m.final_over_initial()) {
      os << " final/initial " << format_real(*ratio);
    }
    os << "\n";
  };
  line("v_sum", r.v_sum);
  line("zero_sum_defect", r.zero_sum_defect);
  line("lyapunov", r.lyapunov);
  if (r.tracking_err) line("tracking_err", *r.tracking_err);
  if (r.q_err) line("q_err", *r.q_err);
  if (r.exploitability) {
    os << "exploitability " << format_real(*r.exploitability) << "\n";
  }
  return os.str();
}

}  // namespace zsfp

#endif  // ZSFP_EVALUATION_HPP
