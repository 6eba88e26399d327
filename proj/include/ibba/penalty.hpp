#pragma once

// Baseline: Pijavskii's sawtooth method applied to the penalized objective
// f(x) + P* max(g_1(x), ..., g_m(x), 0), with the P* schedule 15, 20, 30, ...

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ibba/index_scheme.hpp"
#include "ibba/problem.hpp"
#include "ibba/solver.hpp"
#include "ibba/trace.hpp"

namespace ibba {

struct PenaltyConfig {
  double initial = 15.0;
  double restart = 20.0;
  double increment = 10.0;
  double feasibility_tolerance = 0.0;  // delta: g_j(x) <= delta counts as satisfied
  std::size_t max_rounds = 50;
  std::size_t max_iterations = 100000;  // per round
  bool emit_trace = false;

  /// P* used in round r (0-based): initial, restart, restart + increment, ...
  double pstar(std::size_t round) const {
    if (round == 0) return initial;
    return restart + increment * static_cast<double>(round - 1);
  }
};

inline std::vector<std::string> validate(const PenaltyConfig& c) {
  std::vector<std::string> errors;
  if (!(c.initial > 0.0)) errors.emplace_back("initial P* must be positive");
  if (!(c.restart > 0.0)) errors.emplace_back("restart P* must be positive");
  if (!(c.increment > 0.0)) errors.emplace_back("P* increment must be positive");
  if (!(c.feasibility_tolerance >= 0.0)) errors.emplace_back("feasibility tolerance must be >= 0");
  if (c.max_rounds == 0) errors.emplace_back("max_rounds must be positive");
  if (c.max_iterations < 2) errors.emplace_back("max_iterations must be >= 2");
  return errors;
}

/// f + P* max(g_1, ..., g_m, 0). Every call evaluates all m+1 functions and,
/// when a ledger is attached, records one trial of index m+1.
template <UnivariateFunction Fn>
class PenalizedObjective {
 public:
  PenalizedObjective(const Problem<Fn>& problem, double pstar, EvaluationLedger* ledger = nullptr)
      : problem_(&problem), pstar_(pstar), ledger_(ledger) {}

  double operator()(double x) const {
    double violation = 0.0;
    for (std::size_t j = 1; j <= problem_->constraint_count(); ++j) {
      violation = std::max(violation, detail::evaluate_level(*problem_, j, x));
    }
    const double f = detail::evaluate_level(*problem_, problem_->level_count(), x);
    if (ledger_) ledger_->record_trial(problem_->level_count());
    return f + pstar_ * violation;
  }

  double pstar() const noexcept { return pstar_; }

  /// K_{m+1} + P* max_j K_j.
  double lipschitz_overestimate() const {
    double Kg = 0.0;
    for (const auto& c : problem_->constraints()) Kg = std::max(Kg, c.K);
    return problem_->objective().K + pstar_ * Kg;
  }

 private:
  const Problem<Fn>* problem_;
  double pstar_;
  EvaluationLedger* ledger_;
};

template <UnivariateFunction Fn>
PenalizedObjective<Fn> penalized(const Problem<Fn>& problem, double pstar,
                                 EvaluationLedger* ledger = nullptr) {
  return PenalizedObjective<Fn>(problem, pstar, ledger);
}

struct SawtoothPoint {
  double x;
  double value;
};

struct PijavskiiResult {
  double x = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;  // evaluations of F, including a and b
  bool converged = false;      // false: stopped by max_iterations
  double lower_bound = 0.0;    // min_i R_i at the stop
  std::vector<SawtoothPoint> trials;  // creation order
  std::vector<double> lower_bounds;   // min_i R_i at every selection
  std::vector<TraceRecord> trace;     // index fixed at 1
};

/// Classic Pijavskii method on [a, b] with slope K: split the interval of
/// least R_i = 0.5(F_{i-1} + F_i - K(x_i - x_{i-1})) at
/// y_i = 0.5(x_{i-1} + x_i - (F_i - F_{i-1})/K); stop once the selected
/// interval is no longer than eps.
template <class F>
PijavskiiResult pijavskii_minimize(const F& function, double K, double a, double b, double eps,
                                   std::size_t max_iterations = 100000, bool emit_trace = false) {
  if (!(K > 0.0) || !std::isfinite(K)) throw std::invalid_argument("K must be positive and finite");
  if (!(a < b)) throw std::invalid_argument("empty domain: a must be less than b");
  if (max_iterations < 2) throw std::invalid_argument("max_iterations must be >= 2");

  PijavskiiResult result;
  std::map<double, double> row;                 // x -> F(x)
  std::set<std::pair<double, double>> queue;    // (R, left x)
  std::optional<double> best;

  const auto evaluate = [&](double x, std::optional<std::size_t> t, std::optional<double> R) {
    const double v = static_cast<double>(function(x));
    if (!std::isfinite(v)) throw std::domain_error("non-finite value at x=" + to_shortest(x));
    if (!best || v < *best) {
      best = v;
      result.x = x;
      result.value = v;
    }
    if (emit_trace) {
      result.trace.push_back(TraceRecord{result.trials.size(), x, 1, v, best, t, R});
    }
    result.trials.push_back({x, v});
    row.emplace(x, v);
    return v;
  };
  const auto characteristic = [K](double xl, double Fl, double xr, double Fr) {
    return 0.5 * (Fl + Fr - K * (xr - xl));
  };

  const double Fa = evaluate(a, std::nullopt, std::nullopt);
  const double Fb = evaluate(b, std::nullopt, std::nullopt);
  queue.emplace(characteristic(a, Fa, b, Fb), a);

  for (;;) {
    const auto [R, xl] = *queue.begin();
    const auto left = row.find(xl);
    const auto right = std::next(left);
    const double xr = right->first;
    const double Fl = left->second;
    const double Fr = right->second;
    result.lower_bounds.push_back(R);
    result.lower_bound = R;
    if (xr - xl <= eps) {
      result.converged = true;
      break;
    }
    if (result.trials.size() >= max_iterations) break;

    const double y = 0.5 * (xl + xr - (Fr - Fl) / K);
    if (!(y > xl && y < xr)) {
      throw SolverError("trial point " + to_shortest(y) + " is not interior to [" +
                        to_shortest(xl) + ", " + to_shortest(xr) + "]; K is too small");
    }
    std::optional<std::size_t> t;
    if (emit_trace) t = static_cast<std::size_t>(std::distance(row.begin(), left)) + 1;
    queue.erase(queue.begin());
    const double Fy = evaluate(y, t, R);
    queue.emplace(characteristic(xl, Fl, y, Fy), xl);
    queue.emplace(characteristic(y, Fy, xr, Fr), y);
  }
  result.iterations = result.trials.size();
  return result;
}

struct PenaltyOutcome {
  bool feasible = false;
  double pstar = 0.0;       // final P*
  std::size_t rounds = 0;
  double x = 0.0;           // XPEN
  double value = 0.0;       // penalized value at x
  double objective = 0.0;   // f(x)
  EvaluationLedger ledger;  // accumulated over all rounds
  PijavskiiResult last;     // final round
  std::vector<TraceRecord> trace;
};

/// Runs the penalized Pijavskii method for P* = 15, 20, 30, ... until the
/// returned point satisfies every constraint within the tolerance.
template <UnivariateFunction Fn>
PenaltyOutcome tune_penalty(const Problem<Fn>& problem, const PenaltyConfig& config,
                            std::optional<double> epsilon = std::nullopt) {
  require_valid(problem);
  if (const auto errors = validate(config); !errors.empty()) {
    throw std::invalid_argument("invalid penalty configuration: " + errors.front());
  }
  for (std::size_t j = 1; j <= problem.level_count(); ++j) {
    if (problem.level(j).partial) {
      throw std::invalid_argument(
          "the penalty method evaluates every function on all of [a, b]; level " +
          std::to_string(j) + " is only partially defined");
    }
  }
  const double eps = epsilon.value_or(1e-4 * (problem.b() - problem.a()));
  const std::size_t m = problem.constraint_count();

  PenaltyOutcome out;
  out.ledger = EvaluationLedger(m);
  for (std::size_t round = 0; round < config.max_rounds; ++round) {
    const double pstar = config.pstar(round);
    const auto F = penalized(problem, pstar, &out.ledger);
    out.last = pijavskii_minimize(F, F.lipschitz_overestimate(), problem.a(), problem.b(), eps,
                                  config.max_iterations, config.emit_trace);
    out.pstar = pstar;
    out.rounds = round + 1;
    out.x = out.last.x;
    out.value = out.last.value;
    out.objective = detail::evaluate_level(problem, m + 1, out.x);
    out.feasible = true;
    for (std::size_t j = 1; j <= m; ++j) {
      if (detail::evaluate_level(problem, j, out.x) > config.feasibility_tolerance) {
        out.feasible = false;
        break;
      }
    }
    if (out.feasible || m == 0) break;
  }
  out.trace = out.last.trace;
  for (auto& r : out.trace) r.index = m + 1;
  return out;
}

}  // namespace ibba
