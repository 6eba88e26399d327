#pragma once

// Brute-force verification on uniform grids. Test and fixture tooling only:
// nothing under the solver headers includes this file.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ibba/problem.hpp"

namespace ibba::oracle {

struct GridReport {
  double step = 0.0;
  std::optional<double> best_x;  // absent: infeasible at this resolution
  double best_f = std::numeric_limits<double>::infinity();
  double feasible_fraction = 0.0;
  std::vector<std::size_t> first_violations;  // [j-1]: grid points where g_j is the first g_j > 0

  bool feasible() const noexcept { return best_x.has_value(); }
};

namespace detail {

inline double grid_point(double a, double b, std::size_t n, std::size_t i) {
  if (i == n) return b;
  return a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
}

struct Chunk {
  std::optional<double> best_x;
  double best_f = std::numeric_limits<double>::infinity();
  std::size_t feasible = 0;
  std::vector<std::size_t> first_violations;
};

template <UnivariateFunction Fn>
Chunk scan(const Problem<Fn>& p, std::size_t n, std::size_t lo, std::size_t hi) {
  Chunk c;
  c.first_violations.assign(p.constraint_count(), 0);
  const auto constraints = p.constraints();
  for (std::size_t i = lo; i < hi; ++i) {
    const double x = grid_point(p.a(), p.b(), n, i);
    bool ok = true;
    for (std::size_t j = 0; j < constraints.size(); ++j) {
      if (static_cast<double>(constraints[j].function(x)) > 0.0) {
        ++c.first_violations[j];
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++c.feasible;
    const double f = static_cast<double>(p.objective().function(x));
    if (f < c.best_f) {
      c.best_f = f;
      c.best_x = x;
    }
  }
  return c;
}

}  // namespace detail

/// Evaluates the full constraint chain at the n+1 points a + i(b-a)/n and
/// returns the least objective value among the points passing every g_j <= 0.
/// Ties go to the leftmost point.
template <UnivariateFunction Fn>
GridReport grid_minimize(const Problem<Fn>& problem, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid_minimize needs n >= 2");
  const std::size_t points = n + 1;
  const std::size_t workers =
      points < 100000 ? 1 : std::max<std::size_t>(1, std::min<std::size_t>(8, std::thread::hardware_concurrency()));
  std::vector<std::future<detail::Chunk>> parts;
  const std::size_t per = (points + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * per;
    const std::size_t hi = std::min(points, lo + per);
    if (lo >= hi) break;
    parts.push_back(std::async(std::launch::async, [&problem, n, lo, hi] {
      return detail::scan(problem, n, lo, hi);
    }));
  }
  GridReport report;
  report.step = (problem.b() - problem.a()) / static_cast<double>(n);
  report.first_violations.assign(problem.constraint_count(), 0);
  std::size_t feasible = 0;
  for (auto& part : parts) {
    const detail::Chunk c = part.get();
    feasible += c.feasible;
    for (std::size_t j = 0; j < c.first_violations.size(); ++j) {
      report.first_violations[j] += c.first_violations[j];
    }
    if (c.best_x && c.best_f < report.best_f) {
      report.best_f = c.best_f;
      report.best_x = c.best_x;
    }
  }
  report.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(points);
  if (report.best_x) report.best_f = static_cast<double>(problem.objective().function(*report.best_x));
  return report;
}

/// max |f(x_{i+1}) - f(x_i)| / (x_{i+1} - x_i) over a uniform n-cell grid: a
/// lower bound on the Lipschitz constant of f on [a, b].
template <UnivariateFunction Fn>
double estimate_lipschitz(const Fn& f, double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("estimate_lipschitz needs n >= 2");
  if (!(a < b)) throw std::invalid_argument("empty interval");
  double prev_x = a;
  double prev = static_cast<double>(f(a));
  double L = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = detail::grid_point(a, b, n, i);
    const double v = static_cast<double>(f(x));
    L = std::max(L, std::fabs(v - prev) / (x - prev_x));
    prev = v;
    prev_x = x;
  }
  return L;
}

}  // namespace ibba::oracle
