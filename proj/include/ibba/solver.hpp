#pragma once

// Index Branch-and-Bound: global minimization of f over [a,b] under the
// ordered constraint chain g_1..g_m, driven by index support functions of the
// discontinuous merit function phi_k.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ibba/index_scheme.hpp"
#include "ibba/problem.hpp"
#include "ibba/trace.hpp"

namespace ibba {

/// Sign of (right.index - left.index): zero, positive, negative.
enum class IntervalCase { EqualIndex, RisingIndex, FallingIndex };

enum class SolveStatus { InfeasibleDetected, AccuracyReached, FeasibilityUnresolved, BudgetExhausted };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::InfeasibleDetected: return "InfeasibleDetected";
    case SolveStatus::AccuracyReached: return "AccuracyReached";
    case SolveStatus::FeasibilityUnresolved: return "FeasibilityUnresolved";
    case SolveStatus::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

inline const char* to_string(IntervalCase c) {
  switch (c) {
    case IntervalCase::EqualIndex: return "EqualIndex";
    case IntervalCase::RisingIndex: return "RisingIndex";
    case IntervalCase::FallingIndex: return "FallingIndex";
  }
  return "?";
}

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntervalState {
  Trial left;
  Trial right;
  IntervalCase kind = IntervalCase::EqualIndex;
  double R = 0.0;
  double y_minus = 0.0;
  double y_plus = 0.0;
  bool pruned = false;

  double length() const noexcept { return right.x - left.x; }
};

struct Characteristic {
  double R;
  IntervalCase kind;
};

struct ShrinkPoints {
  double y_minus;
  double y_plus;
};

inline IntervalCase classify(const Trial& left, const Trial& right) noexcept {
  if (left.index == right.index) return IntervalCase::EqualIndex;
  return left.index < right.index ? IntervalCase::RisingIndex : IntervalCase::FallingIndex;
}

// K holds K_1..K_{m+1} (0-based storage); m = K.size() - 1.

inline Characteristic characteristic(const Trial& left, const Trial& right, const ZStar& zstar,
                                     std::span<const double> K) {
  const std::size_t m = K.size() - 1;
  const double Kl = K[left.index - 1];
  const double Kr = K[right.index - 1];
  const double len = right.x - left.x;
  const IntervalCase kind = classify(left, right);
  switch (kind) {
    case IntervalCase::EqualIndex: {
      // 0.5(z_l + z_r - K len); the Z* shift is common to both endpoints.
      const double shift = left.index == m + 1 ? zstar.value() : 0.0;
      return {0.5 * (left.raw + right.raw - Kr * len) - shift, kind};
    }
    case IntervalCase::RisingIndex: {
      const double zl = phi_value(left, zstar, m);
      const double zr = phi_value(right, zstar, m);
      return {zr - Kr * (len - zl / Kl), kind};
    }
    case IntervalCase::FallingIndex: {
      const double zl = phi_value(left, zstar, m);
      const double zr = phi_value(right, zstar, m);
      return {zl - Kl * (len - zr / Kr), kind};
    }
  }
  return {0.0, kind};
}

/// y- = x_l + z_l/K_{nu_l} and y+ = x_r - z_r/K_{nu_r}, clamped to [x_l, x_r].
inline ShrinkPoints shrink_points(const Trial& left, const Trial& right, const ZStar& zstar,
                                  std::span<const double> K) {
  const std::size_t m = K.size() - 1;
  const double y_minus = left.x + phi_value(left, zstar, m) / K[left.index - 1];
  const double y_plus = right.x - phi_value(right, zstar, m) / K[right.index - 1];
  return {std::clamp(y_minus, left.x, right.x), std::clamp(y_plus, left.x, right.x)};
}

inline IntervalState make_interval(const Trial& left, const Trial& right, const ZStar& zstar,
                                   std::span<const double> K) {
  IntervalState s;
  s.left = left;
  s.right = right;
  const Characteristic c = characteristic(left, right, zstar, K);
  s.kind = c.kind;
  s.R = c.R;
  const ShrinkPoints y = shrink_points(left, right, zstar, K);
  s.y_minus = y.y_minus;
  s.y_plus = y.y_plus;
  s.pruned = s.R > 0.0 || (s.kind == IntervalCase::EqualIndex && s.y_minus >= s.y_plus);
  return s;
}

/// Next trial point inside a selected interval. For equal indices this is the
/// Pijavskii point 0.5(x_l + x_r - (z_r - z_l)/K).
inline double new_trial_point(const IntervalState& interval, std::span<const double> K) {
  const Trial& l = interval.left;
  const Trial& r = interval.right;
  double x = 0.0;
  switch (interval.kind) {
    case IntervalCase::EqualIndex:
      x = 0.5 * (l.x + r.x - (r.raw - l.raw) / K[r.index - 1]);
      break;
    case IntervalCase::RisingIndex:
      x = 0.5 * (interval.y_minus + r.x);
      break;
    case IntervalCase::FallingIndex:
      x = 0.5 * (l.x + interval.y_plus);
      break;
  }
  if (!(x > l.x && x < r.x)) {
    throw SolverError("trial point " + to_shortest(x) + " is not interior to [" +
                      to_shortest(l.x) + ", " + to_shortest(r.x) +
                      "]; K may not overestimate the Lipschitz constant");
  }
  return x;
}

/// Leftmost non-pruned interval with minimal R (exact comparison).
inline std::optional<std::size_t> select_interval(std::span<const IntervalState> intervals) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].pruned) continue;
    if (!best || intervals[i].R < intervals[*best].R) best = i;
  }
  return best;
}

enum class CharacteristicUpdate {
  Incremental,  // two new intervals per step; objective-level intervals on Z* decrease
  Full,         // every interval every step
};

using IntervalRow = std::map<double, IntervalState>;  // keyed by left.x

struct IterationView {
  std::size_t trial_count;
  const ZStar& zstar;
  const IntervalRow& intervals;
  const IntervalState* selected;  // null when every interval is pruned
};

struct SolverConfig {
  std::optional<double> epsilon;  // absolute; defaults to 1e-4 (b - a)
  std::size_t max_iterations = 100000;
  bool emit_trace = false;
  CharacteristicUpdate update = CharacteristicUpdate::Incremental;
  std::function<void(const IterationView&)> observer;
};

enum class BoundKind { Enclosure, EnvelopeEstimate };

struct Bounds {
  double lower;
  double upper;
  BoundKind kind;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::BudgetExhausted;
  ZStar zstar;
  std::optional<Bounds> bounds;
  std::size_t max_index = 0;  // M_k
  std::size_t constraint_count = 0;
  double epsilon = 0.0;
  EvaluationLedger ledger;
  std::vector<Trial> trials;              // creation order (x^0, x^1, ...)
  std::vector<IntervalState> intervals;   // final row, left to right, pruned included
  std::optional<std::size_t> selected;    // position in `intervals` at the stop
  double selected_R = std::numeric_limits<double>::quiet_NaN();
  std::vector<TraceRecord> trace;

  /// Trial creation stamps in ascending x (the subscript numbering).
  std::vector<std::size_t> row() const {
    std::vector<std::size_t> ids(trials.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    std::sort(ids.begin(), ids.end(),
              [this](std::size_t p, std::size_t q) { return trials[p].x < trials[q].x; });
    return ids;
  }

  /// The incumbent trial, if any trial reached the objective.
  const Trial* best() const {
    return zstar.present() ? &trials[zstar.witness()] : nullptr;
  }
};

namespace detail {

// Minimum over [lo, hi] of the Pijavskii envelope built from the sorted
// objective-level points (xs, fs) with slope K.
inline double envelope_min(std::span<const double> xs, std::span<const double> fs, double K,
                           double lo, double hi) {
  const auto envelope = [&](double x) {
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    const std::size_t q = static_cast<std::size_t>(it - xs.begin());
    double v = -std::numeric_limits<double>::infinity();
    if (q < xs.size()) v = std::max(v, fs[q] - K * (xs[q] - x));
    if (q > 0) v = std::max(v, fs[q - 1] - K * (x - xs[q - 1]));
    return v;
  };
  double best = std::min(envelope(lo), envelope(hi));
  for (std::size_t p = 0; p + 1 < xs.size(); ++p) {
    if (xs[p + 1] <= lo || xs[p] >= hi) continue;
    const double y = 0.5 * (xs[p] + xs[p + 1] - (fs[p + 1] - fs[p]) / K);
    const double c = std::clamp(y, std::max(lo, xs[p]), std::min(hi, xs[p + 1]));
    best = std::min(best, envelope(c));
  }
  return best;
}

}  // namespace detail

/// Lower/upper bounds on the global minimum after an AccuracyReached stop.
/// Enclosure [R_t + Z*, Z*] when every interval whose endpoints both lie below
/// the objective level has R > 0; otherwise the Pijavskii envelope of the
/// objective-level trials, minimized over the union of intervals with R < 0.
inline Bounds result_bounds(const SolveOutcome& outcome, double objective_K) {
  const std::size_t m = outcome.constraint_count;
  if (outcome.status != SolveStatus::AccuracyReached || outcome.max_index != m + 1 ||
      !outcome.zstar.present()) {
    throw std::logic_error("result_bounds requires an AccuracyReached outcome with M_k = m+1");
  }
  const double z = outcome.zstar.value();
  const bool enclosure = std::all_of(
      outcome.intervals.begin(), outcome.intervals.end(), [m](const IntervalState& s) {
        return std::max(s.left.index, s.right.index) == m + 1 || s.R > 0.0;
      });
  if (enclosure) return {outcome.selected_R + z, z, BoundKind::Enclosure};

  std::vector<std::pair<double, double>> points;
  for (const auto& t : outcome.trials) {
    if (t.index == m + 1) points.emplace_back(t.x, t.raw);
  }
  std::sort(points.begin(), points.end());
  std::vector<double> xs, fs;
  for (const auto& [x, f] : points) {
    xs.push_back(x);
    fs.push_back(f);
  }
  double lower = z;
  for (const auto& s : outcome.intervals) {
    if (s.R < 0.0) lower = std::min(lower, detail::envelope_min(xs, fs, objective_K, s.left.x, s.right.x));
  }
  return {lower, z, BoundKind::EnvelopeEstimate};
}

namespace detail {

template <UnivariateFunction Fn>
class IbbaRun {
 public:
  IbbaRun(const Problem<Fn>& problem, const SolverConfig& config)
      : problem_(problem), config_(config), K_(problem.overestimates()) {
    require_valid(problem);
    if (config.max_iterations < 2) throw std::invalid_argument("max_iterations must be >= 2");
    epsilon_ = config.epsilon.value_or(1e-4 * (problem.b() - problem.a()));
    if (!(epsilon_ >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    out_.constraint_count = problem.constraint_count();
    out_.epsilon = epsilon_;
    out_.ledger = EvaluationLedger(problem.constraint_count());
  }

  SolveOutcome run() {
    const Trial t0 = add_trial(problem_.a(), std::nullopt, std::nullopt);
    const Trial t1 = add_trial(problem_.b(), std::nullopt, std::nullopt);
    insert(make_interval(t0, t1, out_.zstar, K_));

    for (;;) {
      if (config_.update == CharacteristicUpdate::Full) recompute(false);

      const IntervalState* selected = nullptr;
      if (!queue_.empty()) selected = &intervals_.at(queue_.begin()->second);
      if (config_.observer) {
        config_.observer(IterationView{out_.trials.size(), out_.zstar, intervals_, selected});
      }
      if (!selected) {
        out_.status = SolveStatus::InfeasibleDetected;
        break;
      }
      if (selected->length() <= epsilon_) {
        out_.status = out_.max_index == problem_.level_count() ? SolveStatus::AccuracyReached
                                                                : SolveStatus::FeasibilityUnresolved;
        out_.selected_R = selected->R;
        break;
      }
      if (out_.trials.size() >= config_.max_iterations) {
        out_.status = SolveStatus::BudgetExhausted;
        out_.selected_R = selected->R;
        break;
      }

      const IntervalState parent = *selected;
      std::optional<std::size_t> position;
      if (config_.emit_trace) {
        position = static_cast<std::size_t>(
                       std::distance(intervals_.begin(), intervals_.find(parent.left.x))) + 1;
      }
      const double x = new_trial_point(parent, K_);
      improved_ = false;
      const Trial child = add_trial(x, position, parent.R);

      erase(parent.left.x);
      if (improved_ && config_.update == CharacteristicUpdate::Incremental) recompute(true);
      insert(make_interval(parent.left, child, out_.zstar, K_));
      insert(make_interval(child, parent.right, out_.zstar, K_));
    }
    return finish();
  }

 private:
  Trial add_trial(double x, std::optional<std::size_t> t, std::optional<double> R) {
    const Trial trial = evaluate_index(problem_, x, out_.trials.size(), out_.ledger);
    out_.trials.push_back(trial);
    out_.max_index = std::max(out_.max_index, trial.index);
    if (out_.zstar.update(trial, problem_.constraint_count())) improved_ = true;
    if (config_.emit_trace) {
      out_.trace.push_back(
          TraceRecord{trial.order, trial.x, trial.index, trial.raw, out_.zstar.optional(), t, R});
    }
    return trial;
  }

  void insert(const IntervalState& s) {
    intervals_.insert_or_assign(s.left.x, s);
    if (!s.pruned) queue_.emplace(s.R, s.left.x);
  }

  void erase(double left_x) {
    const auto it = intervals_.find(left_x);
    if (!it->second.pruned) queue_.erase({it->second.R, left_x});
    intervals_.erase(it);
  }

  // objective_only: recompute only non-pruned intervals touching level m+1
  // (the only characteristics that depend on Z*). Otherwise rebuild all.
  void recompute(bool objective_only) {
    const std::size_t top = problem_.level_count();
    if (!objective_only) queue_.clear();
    for (auto& [left_x, s] : intervals_) {
      if (objective_only) {
        if (s.pruned || (s.left.index != top && s.right.index != top)) continue;
        queue_.erase({s.R, left_x});
      }
      s = make_interval(s.left, s.right, out_.zstar, K_);
      if (!s.pruned) queue_.emplace(s.R, left_x);
    }
  }

  SolveOutcome finish() {
    out_.intervals.reserve(intervals_.size());
    std::size_t i = 0;
    const double selected_left =
        queue_.empty() ? std::numeric_limits<double>::quiet_NaN() : queue_.begin()->second;
    for (const auto& [left_x, s] : intervals_) {
      if (left_x == selected_left) out_.selected = i;
      out_.intervals.push_back(s);
      ++i;
    }
    if (out_.status == SolveStatus::AccuracyReached) {
      out_.bounds = result_bounds(out_, problem_.objective().K);
    }
    return std::move(out_);
  }

  const Problem<Fn>& problem_;
  const SolverConfig& config_;
  std::vector<double> K_;
  double epsilon_ = 0.0;
  bool improved_ = false;
  IntervalRow intervals_;
  std::set<std::pair<double, double>> queue_;  // (R, left.x): leftmost minimum first
  SolveOutcome out_;
};

}  // namespace detail

template <UnivariateFunction Fn>
SolveOutcome solve(const Problem<Fn>& problem, const SolverConfig& config = {}) {
  return detail::IbbaRun<Fn>(problem, config).run();
}

}  // namespace ibba
