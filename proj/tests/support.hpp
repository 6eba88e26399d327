#pragma once

// Property checkers shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ibba/index_scheme.hpp"
#include "ibba/solver.hpp"

namespace ibba::checks {

/// Index support function of one interval at x, as used to derive its
/// characteristic: both cones for equal indices, otherwise the cone from the
/// higher-index endpoint.
inline double support(const IntervalState& s, const ZStar& zstar, std::span<const double> K, double x) {
  const std::size_t m = K.size() - 1;
  const double zl = phi_value(s.left, zstar, m);
  const double zr = phi_value(s.right, zstar, m);
  switch (s.kind) {
    case IntervalCase::EqualIndex: {
      const double k = K[s.left.index - 1];
      return std::max(zl - k * (x - s.left.x), zr - k * (s.right.x - x));
    }
    case IntervalCase::RisingIndex: return zr - K[s.right.index - 1] * (s.right.x - x);
    case IntervalCase::FallingIndex: return zl - K[s.left.index - 1] * (x - s.left.x);
  }
  return 0.0;
}

struct DominanceCount {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest psi - phi seen
};

/// For every non-pruned interval in the row, compares the support function
/// with phi_k at the grid points a + i*step inside the interval whose index
/// equals the larger endpoint index.
template <UnivariateFunction Fn>
void check_dominance(const Problem<Fn>& problem, const IterationView& view, double step, double tol,
                     DominanceCount& count) {
  const auto K = problem.overestimates();
  const std::size_t m = problem.constraint_count();
  for (const auto& [left_x, s] : view.intervals) {
    if (s.pruned) continue;
    const std::size_t top = std::max(s.left.index, s.right.index);
    if (top == m + 1 && !view.zstar.present()) continue;
    const auto first = static_cast<long long>(std::ceil((s.left.x - problem.a()) / step));
    for (long long i = first;; ++i) {
      const double x = problem.a() + static_cast<double>(i) * step;
      if (x > s.right.x) break;
      if (x < s.left.x) continue;
      const Trial t = evaluate_index(problem, x);
      if (t.index != top) continue;
      const double phi = phi_value(t, view.zstar, m);
      const double psi = support(s, view.zstar, K, x);
      ++count.checked;
      count.worst = std::max(count.worst, psi - phi);
      if (psi > phi + tol) ++count.violations;
    }
  }
}

struct Subdivision {
  double left_x;
  double right_x;
  std::size_t left_index;
  std::size_t right_index;
};

/// Runs the solver and records every selected interval together with the
/// trial placed in it.
template <UnivariateFunction Fn>
std::pair<SolveOutcome, std::vector<std::pair<Subdivision, double>>> run_with_subdivisions(
    const Problem<Fn>& problem, SolverConfig config) {
  std::vector<Subdivision> selected;
  config.observer = [&selected](const IterationView& v) {
    if (v.selected) {
      selected.push_back({v.selected->left.x, v.selected->right.x, v.selected->left.index,
                          v.selected->right.index});
    }
  };
  SolveOutcome outcome = solve(problem, config);
  std::vector<std::pair<Subdivision, double>> splits;
  for (std::size_t i = 0; i + 2 < outcome.trials.size() && i < selected.size(); ++i) {
    splits.emplace_back(selected[i], outcome.trials[i + 2].x);
  }
  return {std::move(outcome), std::move(splits)};
}

/// Number of subdivisions whose longer child exceeds
/// 0.5 (1 + max(L_l/K_l, L_r/K_r)) times the parent length.
inline std::size_t contraction_violations(const std::vector<std::pair<Subdivision, double>>& splits,
                                          std::span<const double> L, std::span<const double> K) {
  std::size_t bad = 0;
  for (const auto& [s, x] : splits) {
    const double len = s.right_x - s.left_x;
    const double longer = std::max(x - s.left_x, s.right_x - x);
    const double q = std::max(L[s.left_index - 1] / K[s.left_index - 1], L[s.right_index - 1] / K[s.right_index - 1]);
    if (longer > 0.5 * (1.0 + q) * len) ++bad;
  }
  return bad;
}

}  // namespace ibba::checks
