//
// Copyright 2026 The inca-lab Authors
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
//

// Static SVG line charts for result rows.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "inca/harness.h"

namespace inca {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 360;
constexpr int kLeft = 70;
constexpr int kRight = 200;
constexpr int kTop = 30;
constexpr int kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                               "#bcbd22", "#17becf"};

struct Axis {
  std::string name;
  double (*get)(const ResultRow&);
};

const Axis kAxes[] = {
    {"T", [](const ResultRow& r) { return static_cast<double>(r.T); }},
    {"k", [](const ResultRow& r) { return static_cast<double>(r.k); }},
    {"n", [](const ResultRow& r) { return static_cast<double>(r.n); }},
    {"rho", [](const ResultRow& r) { return r.rho; }},
    {"gamma", [](const ResultRow& r) { return r.gamma; }},
    {"gamma2", [](const ResultRow& r) { return r.gamma2; }},
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') {
      out += "&lt;";
    } else if (c == '>') {
      out += "&gt;";
    } else if (c == '&') {
      out += "&amp;";
    } else {
      out += c;
    }
  }
  return out;
}

// One panel: metric against the axis with the most distinct values.
std::string Panel(const std::string& metric,
                  const std::vector<const ResultRow*>& rows, int y0) {
  const Axis* x_axis = &kAxes[0];
  size_t best = 0;
  for (const Axis& a : kAxes) {
    std::set<double> values;
    for (const ResultRow* r : rows) values.insert(a.get(*r));
    if (values.size() > best) {
      best = values.size();
      x_axis = &a;
    }
  }
  if (best < 2) return "";

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const ResultRow* r : rows) {
    std::string key = r->method;
    for (const Axis& a : kAxes) {
      if (&a == x_axis) continue;
      std::set<double> values;
      for (const ResultRow* o : rows) {
        if (o->method == r->method) values.insert(a.get(*o));
      }
      if (values.size() > 1) key += " " + a.name + "=" + Num(a.get(*r));
    }
    if (std::isfinite(r->value)) {
      series[key].emplace_back(x_axis->get(*r), r->value);
    }
  }
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (const auto& [x, y] : pts) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (series.empty()) return "";
  const bool log_y = y_lo > 0.0 && y_hi / y_lo > 100.0;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double a = ty(y_lo);
  double b = ty(y_hi);
  if (b - a < 1e-12) {
    a -= 0.5;
    b += 0.5;
  }
  if (x_hi - x_lo < 1e-12) x_hi = x_lo + 1.0;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) {
    return y0 + kTop + ph - (ty(y) - a) / (b - a) * ph;
  };

  std::ostringstream s;
  s << "<g>\n<text x=\"" << kLeft << "\" y=\"" << y0 + 18
    << "\" font-size=\"14\">" << Escape(metric) << (log_y ? " (log scale)" : "")
    << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << y0 + kTop << "\" width=\"" << pw
    << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
    const double fy = a + (b - a) * i / 4.0;
    const double label_y = log_y ? std::pow(10.0, fy) : fy;
    s << "<text x=\"" << px(fx) << "\" y=\"" << y0 + kTop + ph + 16
      << "\" font-size=\"10\" text-anchor=\"middle\">" << Num(fx)
      << "</text>\n";
    s << "<text x=\"" << kLeft - 4 << "\" y=\"" << py(label_y) + 3
      << "\" font-size=\"10\" text-anchor=\"end\">" << Num(label_y)
      << "</text>\n";
  }
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << y0 + kHeight - 10
    << "\" font-size=\"12\" text-anchor=\"middle\">" << x_axis->name
    << "</text>\n";
  int idx = 0;
  for (const auto& [key, pts] : series) {
    const char* color = kColors[idx % 10];
    s << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) s << px(x) << ',' << py(y) << ' ';
    s << "\"/>\n";
    for (const auto& [x, y] : pts) {
      s << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    const int ly = y0 + kTop + 12 + 14 * idx;
    s << "<text x=\"" << kLeft + pw + 10 << "\" y=\"" << ly
      << "\" font-size=\"10\" fill=\"" << color << "\">" << Escape(key)
      << "</text>\n";
    ++idx;
  }
  s << "</g>\n";
  return s.str();
}

}  // namespace

std::string RenderSvg(const std::vector<ResultRow>& rows) {
  std::map<std::string, std::vector<const ResultRow*>> by_metric;
  for (const ResultRow& r : rows) by_metric[r.metric].push_back(&r);
  std::vector<std::string> panels;
  for (const auto& [metric, group] : by_metric) {
    std::string p = Panel(metric, group,
                          static_cast<int>(panels.size()) * kHeight);
    if (!p.empty()) panels.push_back(p);
  }
  if (panels.empty()) return "";
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight * panels.size() << "\" font-family=\"sans-serif\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const std::string& p : panels) s << p;
  s << "</svg>\n";
  return s.str();
}

}  // namespace inca
