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

#ifndef ZSFP_PLOT_HPP
#define ZSFP_PLOT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zsfp/planning.hpp"
#include "zsfp/trace_io.hpp"

namespace zsfp {

namespace detail {

inline std::string fixed(double x, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

struct Series {
  const char* label;
  const char* color;
  std::vector<double> y;
};

}  // namespace detail

// One panel per state: v_hat_1, v_hat_2 and their sum against the stage
// index on a log axis, with dashed reference lines at the minimax values
// when a solution is given. Output depends only on the inputs.
inline std::string render_svg(const Trace& trace,
                              const ShapleySolution* solution = nullptr) {
  if (trace.records.empty()) throw Error("no records");
  constexpr double kWidth = 820, kPanelHeight = 240;
  constexpr double kLeft = 70, kRight = 150, kTop = 30, kBottom = 40;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  const int n = trace.n_states;

  std::vector<double> xs;
  for (const auto& r : trace.records) {
    xs.push_back(std::log10(std::max<double>(1.0, static_cast<double>(r.step))));
  }
  const double x_max = std::max(1.0, std::ceil(xs.back()));
  auto px = [&](double lx) { return kLeft + plot_w * lx / x_max; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         detail::fixed(kWidth, 0) + "\" height=\"" +
         detail::fixed(kPanelHeight * n, 0) + "\" font-family=\"sans-serif\" "
         "font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int s = 0; s < n; ++s) {
    std::vector<detail::Series> series = {
        {"v1", "#1f77b4", {}}, {"v2", "#d62728", {}}, {"v1+v2", "#222222", {}}};
    for (const auto& r : trace.records) {
      const auto& d = r.diagnostics.states[s];
      series[0].y.push_back(d.v_hat_1);
      series[1].y.push_back(d.v_hat_2);
      series[2].y.push_back(d.v_sum);
    }
    std::vector<std::pair<std::string, double>> refs;
    if (solution != nullptr) {
      refs.emplace_back("val1", solution->v_star[Player::kOne](s));
      refs.emplace_back("val2", solution->v_star[Player::kTwo](s));
    }
    double lo = 0.0, hi = 0.0;
    for (const auto& ser : series) {
      for (double y : ser.y) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    for (const auto& [_, y] : refs) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    const double pad = std::max(1e-6, 0.05 * (hi - lo));
    lo -= pad;
    hi += pad;
    const double top = kPanelHeight * s + kTop;
    auto py = [&](double y) { return top + plot_h * (hi - y) / (hi - lo); };

    svg += "<g id=\"state" + std::to_string(s) + "\">\n";
    svg += "<text x=\"" + detail::fixed(kLeft) + "\" y=\"" +
           detail::fixed(top - 10) + "\" font-size=\"13\">state " +
           std::to_string(s) + "</text>\n";
    svg += "<rect x=\"" + detail::fixed(kLeft) + "\" y=\"" +
           detail::fixed(top) + "\" width=\"" + detail::fixed(plot_w) +
           "\" height=\"" + detail::fixed(plot_h) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = 0; e <= static_cast<int>(x_max); ++e) {
      const double x = px(e);
      svg += "<line x1=\"" + detail::fixed(x) + "\" y1=\"" +
             detail::fixed(top + plot_h) + "\" x2=\"" + detail::fixed(x) +
             "\" y2=\"" + detail::fixed(top + plot_h + 4) +
             "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + detail::fixed(x) + "\" y=\"" +
             detail::fixed(top + plot_h + 16) +
             "\" text-anchor=\"middle\">1e" + std::to_string(e) + "</text>\n";
    }
    for (int t = 0; t <= 4; ++t) {
      const double y = lo + (hi - lo) * t / 4.0;
      svg += "<text x=\"" + detail::fixed(kLeft - 6) + "\" y=\"" +
             detail::fixed(py(y) + 4) + "\" text-anchor=\"end\">" +
             detail::fixed(y, 3) + "</text>\n";
    }
    if (lo < 0.0 && hi > 0.0) {
      svg += "<line x1=\"" + detail::fixed(kLeft) + "\" y1=\"" +
             detail::fixed(py(0.0)) + "\" x2=\"" + detail::fixed(kLeft + plot_w) +
             "\" y2=\"" + detail::fixed(py(0.0)) +
             "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
      const double y = py(refs[i].second);
      const char* color = series[i].color;
      svg += "<line x1=\"" + detail::fixed(kLeft) + "\" y1=\"" +
             detail::fixed(y) + "\" x2=\"" + detail::fixed(kLeft + plot_w) +
             "\" y2=\"" + detail::fixed(y) + "\" stroke=\"" + color +
             "\" stroke-dasharray=\"6,4\"/>\n";
    }
    for (const auto& ser : series) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(ser.color) +
             "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < ser.y.size(); ++i) {
        if (i) svg += " ";
        svg += detail::fixed(px(xs[i])) + "," + detail::fixed(py(ser.y[i]));
      }
      svg += "\"/>\n";
      // Markers at stages 10, 20, 50, 100, 200, 500, ...
      std::size_t next = 0;
      for (double mark = 10; mark <= std::pow(10.0, x_max); ) {
        while (next < trace.records.size() &&
               static_cast<double>(trace.records[next].step) < mark) {
          ++next;
        }
        if (next >= trace.records.size()) break;
        svg += "<circle cx=\"" + detail::fixed(px(xs[next])) + "\" cy=\"" +
               detail::fixed(py(ser.y[next])) + "\" r=\"2.5\" fill=\"" +
               ser.color + "\"/>\n";
        const double mantissa = mark / std::pow(10.0, std::floor(std::log10(mark) + 1e-9));
        mark *= mantissa < 1.5 ? 2.0 : mantissa < 3.0 ? 2.5 : 2.0;
      }
    }
    double ly = top + 12;
    auto legend = [&](const std::string& label, const std::string& color,
                      bool dashed) {
      const double lx = kLeft + plot_w + 12;
      svg += "<line x1=\"" + detail::fixed(lx) + "\" y1=\"" +
             detail::fixed(ly - 4) + "\" x2=\"" + detail::fixed(lx + 24) +
             "\" y2=\"" + detail::fixed(ly - 4) + "\" stroke=\"" + color +
             "\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
      svg += "<text x=\"" + detail::fixed(lx + 30) + "\" y=\"" +
             detail::fixed(ly) + "\">" + label + "</text>\n";
      ly += 16;
    };
    for (const auto& ser : series) legend(ser.label, ser.color, false);
    for (std::size_t i = 0; i < refs.size(); ++i) {
      legend(refs[i].first + " = " + detail::fixed(refs[i].second, 3),
             series[i].color, true);
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace zsfp

#endif  // ZSFP_PLOT_HPP
