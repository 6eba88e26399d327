#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>

#include "ibba/problem.hpp"

namespace ibba {

/// A point x with its index nu(x) and raw = g_nu(x). `order` is the creation
/// stamp k of the trial x^k.
struct Trial {
  double x = 0.0;
  std::size_t index = 0;
  double raw = 0.0;
  std::size_t order = 0;

  friend bool operator==(const Trial&, const Trial&) = default;
};

class TrialError : public std::runtime_error {
 public:
  TrialError(double x, std::size_t level, const std::string& what)
      : std::runtime_error("evaluation of level " + std::to_string(level) + " at x=" +
                           std::to_string(x) + " failed: " + what),
        x_(x),
        level_(level) {}

  double x() const noexcept { return x_; }
  std::size_t level() const noexcept { return level_; }

 private:
  double x_;
  std::size_t level_;
};

// Incumbent Z*_k: least objective value over trials of index m+1.
class ZStar {
 public:
  bool present() const noexcept { return value_.has_value(); }
  double value() const {
    if (!value_) throw std::logic_error("Z* is absent: no trial has reached the objective");
    return *value_;
  }
  const std::optional<double>& optional() const noexcept { return value_; }
  /// Creation stamp of the trial attaining Z*.
  std::size_t witness() const noexcept { return witness_; }

  /// Returns true on a strict decrease or the first assignment.
  bool update(const Trial& trial, std::size_t constraint_count) {
    if (trial.index != constraint_count + 1) return false;
    if (value_ && !(trial.raw < *value_)) return false;
    value_ = trial.raw;
    witness_ = trial.order;
    return true;
  }

 private:
  std::optional<double> value_;
  std::size_t witness_ = 0;
};

namespace detail {

template <UnivariateFunction Fn>
double evaluate_level(const Problem<Fn>& problem, std::size_t level, double x) {
  double v;
  try {
    v = static_cast<double>(problem.level(level).function(x));
  } catch (const std::exception& e) {
    throw TrialError(x, level, e.what());
  }
  if (!std::isfinite(v)) throw TrialError(x, level, "non-finite value");
  return v;
}

}  // namespace detail

/// Evaluates g_1, g_2, ... at x and stops at the first g_j(x) > 0; evaluates
/// f only if every constraint holds. Exactly nu(x) evaluations are made.
template <UnivariateFunction Fn>
Trial evaluate_index(const Problem<Fn>& problem, double x, std::size_t order = 0) {
  const std::size_t m = problem.constraint_count();
  for (std::size_t j = 1; j <= m; ++j) {
    const double g = detail::evaluate_level(problem, j, x);
    if (g > 0.0) return Trial{x, j, g, order};
  }
  return Trial{x, m + 1, detail::evaluate_level(problem, m + 1, x), order};
}

template <UnivariateFunction Fn>
Trial evaluate_index(const Problem<Fn>& problem, double x, std::size_t order,
                     EvaluationLedger& ledger) {
  Trial t = evaluate_index(problem, x, order);
  ledger.record_trial(t.index);
  return t;
}

/// phi_k at a trial: raw for constraint levels, raw - Z* on the objective level.
inline double phi_value(const Trial& trial, const ZStar& zstar, std::size_t constraint_count) {
  if (trial.index <= constraint_count) return trial.raw;
  return trial.raw - zstar.value();
}

}  // namespace ibba
