#pragma once

// Dynamic diagram of a search: the objective curve over [a, b], feasible
// subregions as bold segments on the axis, and rows of '+' marks under the
// axis at every trial point. An IBBA trace gets one row per index level (top
// row = index 1); a PEN trace gets a single row.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibba/problem.hpp"
#include "ibba/trace.hpp"

namespace ibba {

class TraceMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace svg {

inline constexpr int kWidth = 900;
inline constexpr int kHeight = 675;
inline constexpr double kLeft = 70.0;
inline constexpr double kRight = 870.0;
inline constexpr double kTop = 30.0;
inline constexpr double kCurveBottom = 430.0;
inline constexpr double kAxis = 455.0;
inline constexpr double kFirstRow = 485.0;
inline constexpr double kLastRow = 655.0;
inline constexpr std::size_t kSamples = 800;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace svg

/// Throws TraceMismatch unless the trace could have come from this problem.
template <UnivariateFunction Fn>
void check_trace(const Problem<Fn>& problem, const Trace& trace) {
  if (trace.method != "ibba" && trace.method != "pen") {
    throw TraceMismatch("unknown trace method '" + trace.method + "'");
  }
  if (trace.levels != problem.level_count()) {
    throw TraceMismatch("trace has " + std::to_string(trace.levels) + " levels, problem has " +
                        std::to_string(problem.level_count()));
  }
  if (trace.a != problem.a() || trace.b != problem.b()) {
    throw TraceMismatch("trace domain [" + to_shortest(trace.a) + ", " + to_shortest(trace.b) +
                        "] differs from the problem's");
  }
  for (const auto& r : trace.records) {
    const std::string where = "record " + std::to_string(r.k) + ": ";
    if (!(r.x >= problem.a() && r.x <= problem.b())) throw TraceMismatch(where + "x outside [a, b]");
    if (r.index == 0 || r.index > trace.levels) throw TraceMismatch(where + "index out of range");
    if (trace.method == "pen" && r.index != trace.levels) {
      throw TraceMismatch(where + "penalty traces have every trial at the top level");
    }
    if (trace.method == "ibba") {
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = static_cast<double>(problem.level(r.index).function(r.x));
      } catch (const std::exception&) {
      }
      if (!(std::fabs(v - r.raw) <= 1e-9 * std::max(1.0, std::fabs(r.raw)))) {
        throw TraceMismatch(where + "value does not match level " + std::to_string(r.index));
      }
    }
  }
}

/// Fixed 900x675 layout; an empty trace draws the axes only. Each mark row is
/// a <g class="marks" data-level=..> holding one <text> per trial.
template <UnivariateFunction Fn>
void write_svg(std::ostream& out, const Problem<Fn>& problem, const Trace& trace) {
  using namespace svg;
  check_trace(problem, trace);
  const double a = problem.a();
  const double b = problem.b();
  const auto px = [&](double x) { return kLeft + (x - a) / (b - a) * (kRight - kLeft); };

  std::vector<double> xs(kSamples + 1);
  std::vector<double> fs(kSamples + 1, std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> feasible(kSamples + 1, false);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i <= kSamples; ++i) {
    const double x = i == kSamples ? b : a + (b - a) * static_cast<double>(i) / kSamples;
    xs[i] = x;
    bool ok = true;
    for (const auto& c : problem.constraints()) {
      double g = std::numeric_limits<double>::quiet_NaN();
      try {
        g = static_cast<double>(c.function(x));
      } catch (const std::exception&) {
      }
      if (!(g <= 0.0)) {
        ok = false;
        break;
      }
    }
    feasible[i] = ok;
    if (problem.objective().partial && !ok) continue;
    try {
      const double f = static_cast<double>(problem.objective().function(x));
      if (std::isfinite(f)) {
        fs[i] = f;
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    } catch (const std::exception&) {
    }
  }
  if (!(lo <= hi)) {
    lo = -1.0;
    hi = 1.0;
  } else if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const auto py = [&](double f) { return kCurveBottom - (f - lo) / (hi - lo) * (kCurveBottom - kTop); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(problem.name()) << " (" << trace.method << ", " << trace.records.size()
      << " trials)</text>\n";

  // axes
  out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kAxis) << "\" x2=\"" << num(kRight)
      << "\" y2=\"" << num(kAxis) << "\"/>\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kAxis) << "\"/>\n";
  out << "</g>\n";
  out << "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"" << num(kAxis + 15) << "\" text-anchor=\"middle\">"
      << to_shortest(a) << "</text>\n";
  out << "<text x=\"" << num(kRight) << "\" y=\"" << num(kAxis + 15) << "\" text-anchor=\"middle\">"
      << to_shortest(b) << "</text>\n";
  out << "<text x=\"" << num(kLeft - 5) << "\" y=\"" << num(kTop + 4) << "\" text-anchor=\"end\">"
      << num(hi) << "</text>\n";
  out << "<text x=\"" << num(kLeft - 5) << "\" y=\"" << num(kCurveBottom + 4)
      << "\" text-anchor=\"end\">" << num(lo) << "</text>\n";
  out << "</g>\n";
  if (trace.records.empty()) {
    out << "</svg>\n";
    return;
  }

  // objective curve, broken wherever f is undefined
  out << "<g class=\"curve\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.2\">\n";
  std::string path;
  for (std::size_t i = 0; i <= kSamples; ++i) {
    if (std::isnan(fs[i])) {
      if (!path.empty()) out << "<polyline points=\"" << path << "\"/>\n";
      path.clear();
      continue;
    }
    if (!path.empty()) path += ' ';
    path += num(px(xs[i])) + ',' + num(py(fs[i]));
  }
  if (!path.empty()) out << "<polyline points=\"" << path << "\"/>\n";
  out << "</g>\n";

  // feasible subregions
  out << "<g class=\"feasible\" stroke=\"black\" stroke-width=\"4\">\n";
  for (std::size_t i = 0; i <= kSamples;) {
    if (!feasible[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 <= kSamples && feasible[j + 1]) ++j;
    const double x1 = px(xs[i]);
    const double x2 = j == i ? x1 + 1.0 : px(xs[j]);
    out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(kAxis) << "\" x2=\"" << num(x2)
        << "\" y2=\"" << num(kAxis) << "\"/>\n";
    i = j + 1;
  }
  out << "</g>\n";

  // trial marks
  const std::size_t rows = trace.method == "pen" ? 1 : trace.levels;
  const double spacing = std::min(18.0, (kLastRow - kFirstRow) / static_cast<double>(std::max<std::size_t>(rows, 2) - 1));
  for (std::size_t level = 1; level <= rows; ++level) {
    const double y = kFirstRow + spacing * static_cast<double>(level - 1);
    const std::size_t data_level = trace.method == "pen" ? trace.levels : level;
    out << "<g class=\"marks\" data-level=\"" << data_level
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">\n";
    for (const auto& r : trace.records) {
      if (r.index != data_level) continue;
      out << "<text x=\"" << num(px(r.x)) << "\" y=\"" << num(y) << "\">+</text>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace ibba
