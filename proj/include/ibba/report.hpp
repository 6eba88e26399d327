#pragma once

// Per-run reports with the column names of the published result tables
// (XIBBA/FIBBA/N_g1.../Iterations/Eval., XPEN/FXPEN/P*), and the IBBA vs PEN
// comparison table.

#include <cstddef>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ibba/penalty.hpp"
#include "ibba/problem.hpp"
#include "ibba/solver.hpp"
#include "ibba/trace.hpp"

namespace ibba {

enum class Method { Ibba, Pen };

inline const char* to_string(Method m) { return m == Method::Ibba ? "ibba" : "pen"; }

struct RunReport {
  std::string problem;
  Method method = Method::Ibba;
  SolveStatus status = SolveStatus::BudgetExhausted;
  std::optional<double> x;
  std::optional<double> f;
  std::vector<std::size_t> constraint_trials;  // N_g1..N_gm
  std::size_t objective_trials = 0;            // N_f
  std::size_t iterations = 0;
  std::size_t weighted_evaluations = 0;  // Eval.
  double epsilon = 0.0;
  std::optional<Bounds> bounds;
  std::optional<double> pstar;  // PEN only
  std::optional<std::size_t> rounds;

  /// Eval. recomputed from the counters equals the stored total.
  bool consistent() const {
    std::size_t total = 0;
    std::size_t count = objective_trials;
    for (std::size_t j = 0; j < constraint_trials.size(); ++j) {
      total += (j + 1) * constraint_trials[j];
      count += constraint_trials[j];
    }
    total += (constraint_trials.size() + 1) * objective_trials;
    return total == weighted_evaluations && count == iterations;
  }
};

/// 0 solved, 2 infeasible, 3 feasibility unresolved, 4 budget exhausted.
inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::AccuracyReached: return 0;
    case SolveStatus::InfeasibleDetected: return 2;
    case SolveStatus::FeasibilityUnresolved: return 3;
    case SolveStatus::BudgetExhausted: return 4;
  }
  return 1;
}

namespace detail {

inline void copy_ledger(RunReport& r, const EvaluationLedger& ledger) {
  const std::size_t m = ledger.constraint_count();
  r.constraint_trials.clear();
  for (std::size_t j = 1; j <= m; ++j) r.constraint_trials.push_back(ledger.constraint_trials(j));
  r.objective_trials = ledger.objective_trials();
  r.iterations = ledger.iterations();
  r.weighted_evaluations = ledger.weighted_evaluations();
}

}  // namespace detail

template <UnivariateFunction Fn>
RunReport make_report(const Problem<Fn>& problem, const SolveOutcome& outcome) {
  RunReport r;
  r.problem = problem.name();
  r.method = Method::Ibba;
  r.status = outcome.status;
  if (const Trial* best = outcome.best()) {
    r.x = best->x;
    r.f = best->raw;
  }
  detail::copy_ledger(r, outcome.ledger);
  r.epsilon = outcome.epsilon;
  r.bounds = outcome.bounds;
  return r;
}

/// PEN status: AccuracyReached when the last round converged to a feasible
/// point, FeasibilityUnresolved when every round ended infeasible,
/// BudgetExhausted when the last round hit its iteration cap.
template <UnivariateFunction Fn>
RunReport make_report(const Problem<Fn>& problem, const PenaltyOutcome& outcome, double epsilon) {
  RunReport r;
  r.problem = problem.name();
  r.method = Method::Pen;
  if (!outcome.last.converged) {
    r.status = SolveStatus::BudgetExhausted;
  } else {
    r.status = outcome.feasible ? SolveStatus::AccuracyReached : SolveStatus::FeasibilityUnresolved;
  }
  r.x = outcome.x;
  r.f = outcome.objective;
  detail::copy_ledger(r, outcome.ledger);
  r.epsilon = epsilon;
  r.pstar = outcome.pstar;
  r.rounds = outcome.rounds;
  return r;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

inline void write_report(std::ostream& out, const RunReport& r) {
  const bool ibba = r.method == Method::Ibba;
  out << "problem: " << r.problem << '\n';
  out << "method: " << to_string(r.method) << '\n';
  out << "status: " << to_string(r.status) << '\n';
  out << (ibba ? "XIBBA: " : "XPEN: ") << (r.x ? format_number(*r.x) : "-") << '\n';
  out << (ibba ? "FIBBA: " : "FXPEN: ") << (r.f ? format_number(*r.f) : "-") << '\n';
  if (ibba) {
    for (std::size_t j = 0; j < r.constraint_trials.size(); ++j) {
      out << "N_g" << j + 1 << ": " << r.constraint_trials[j] << '\n';
    }
    out << "N_f: " << r.objective_trials << '\n';
  } else {
    out << "P*: " << (r.pstar ? to_shortest(*r.pstar) : "-") << '\n';
    out << "rounds: " << (r.rounds ? std::to_string(*r.rounds) : "-") << '\n';
  }
  out << "Iterations: " << r.iterations << '\n';
  out << "Eval.: " << r.weighted_evaluations << '\n';
  out << "epsilon: " << to_shortest(r.epsilon) << '\n';
  if (r.bounds) {
    out << "bounds: [" << format_number(r.bounds->lower) << ", " << format_number(r.bounds->upper)
        << "] " << (r.bounds->kind == BoundKind::Enclosure ? "enclosure" : "envelope-estimate")
        << '\n';
  }
}

inline nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["problem"] = r.problem;
  j["method"] = to_string(r.method);
  j["status"] = to_string(r.status);
  j["x"] = r.x ? nlohmann::json(*r.x) : nlohmann::json(nullptr);
  j["f"] = r.f ? nlohmann::json(*r.f) : nlohmann::json(nullptr);
  j["constraint_trials"] = r.constraint_trials;
  j["objective_trials"] = r.objective_trials;
  j["iterations"] = r.iterations;
  j["weighted_evaluations"] = r.weighted_evaluations;
  j["epsilon"] = r.epsilon;
  if (r.bounds) {
    j["bounds"] = {{"lower", r.bounds->lower},
                   {"upper", r.bounds->upper},
                   {"kind", r.bounds->kind == BoundKind::Enclosure ? "enclosure" : "envelope-estimate"}};
  }
  if (r.pstar) j["pstar"] = *r.pstar;
  if (r.rounds) j["rounds"] = *r.rounds;
  return j;
}

struct CompareRow {
  std::string problem;
  std::optional<std::string> error;  // set when either run failed; row excluded from averages
  std::size_t pen_iterations = 0;
  std::size_t ibba_iterations = 0;
  std::size_t pen_evaluations = 0;
  std::size_t ibba_evaluations = 0;

  double iteration_speedup() const {
    return static_cast<double>(pen_iterations) / static_cast<double>(ibba_iterations);
  }
  double evaluation_speedup() const {
    return static_cast<double>(pen_evaluations) / static_cast<double>(ibba_evaluations);
  }
};

struct CompareAverages {
  std::size_t problems = 0;
  double pen_iterations = 0.0;
  double ibba_iterations = 0.0;
  double pen_evaluations = 0.0;
  double ibba_evaluations = 0.0;
  double mean_iteration_speedup = 0.0;  // arithmetic mean of per-problem speedups
  double mean_evaluation_speedup = 0.0;

  double ratio_iteration_speedup() const { return pen_iterations / ibba_iterations; }
  double ratio_evaluation_speedup() const { return pen_evaluations / ibba_evaluations; }
};

inline std::optional<CompareAverages> averages(const std::vector<CompareRow>& rows) {
  CompareAverages a;
  for (const auto& r : rows) {
    if (r.error) continue;
    ++a.problems;
    a.pen_iterations += static_cast<double>(r.pen_iterations);
    a.ibba_iterations += static_cast<double>(r.ibba_iterations);
    a.pen_evaluations += static_cast<double>(r.pen_evaluations);
    a.ibba_evaluations += static_cast<double>(r.ibba_evaluations);
    a.mean_iteration_speedup += r.iteration_speedup();
    a.mean_evaluation_speedup += r.evaluation_speedup();
  }
  if (a.problems == 0) return std::nullopt;
  const double n = static_cast<double>(a.problems);
  a.pen_iterations /= n;
  a.ibba_iterations /= n;
  a.pen_evaluations /= n;
  a.ibba_evaluations /= n;
  a.mean_iteration_speedup /= n;
  a.mean_evaluation_speedup /= n;
  return a;
}

inline CompareRow compare_row(const RunReport& pen, const RunReport& ibba) {
  CompareRow row;
  row.problem = ibba.problem;
  row.pen_iterations = pen.iterations;
  row.ibba_iterations = ibba.iterations;
  row.pen_evaluations = pen.weighted_evaluations;
  row.ibba_evaluations = ibba.weighted_evaluations;
  if (ibba.status != SolveStatus::AccuracyReached) {
    row.error = std::string("ibba: ") + to_string(ibba.status);
  } else if (pen.status != SolveStatus::AccuracyReached) {
    row.error = std::string("pen: ") + to_string(pen.status);
  }
  return row;
}

/// Tab-separated table: one row per problem in input order, then two average
/// rows (mean of per-problem speedups, and speedup of the mean counts).
inline void write_compare(std::ostream& out, const std::vector<CompareRow>& rows) {
  char buf[64];
  const auto fixed2 = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  const auto fixed1 = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return std::string(buf);
  };
  out << "Problem\tPEN Iter.\tIBBA Iter.\tSpeedup\tPEN Eval.\tIBBA Eval.\tSpeedup\n";
  for (const auto& r : rows) {
    if (r.error) {
      out << r.problem << "\terror: " << *r.error << '\n';
      continue;
    }
    out << r.problem << '\t' << r.pen_iterations << '\t' << r.ibba_iterations << '\t'
        << fixed2(r.iteration_speedup()) << '\t' << r.pen_evaluations << '\t' << r.ibba_evaluations
        << '\t' << fixed2(r.evaluation_speedup()) << '\n';
  }
  if (const auto a = averages(rows)) {
    out << "Average\t" << fixed1(a->pen_iterations) << '\t' << fixed1(a->ibba_iterations) << '\t'
        << fixed2(a->mean_iteration_speedup) << '\t' << fixed1(a->pen_evaluations) << '\t'
        << fixed1(a->ibba_evaluations) << '\t' << fixed2(a->mean_evaluation_speedup) << '\n';
    out << "Average (ratio of means)\t" << fixed1(a->pen_iterations) << '\t'
        << fixed1(a->ibba_iterations) << '\t' << fixed2(a->ratio_iteration_speedup()) << '\t'
        << fixed1(a->pen_evaluations) << '\t' << fixed1(a->ibba_evaluations) << '\t'
        << fixed2(a->ratio_evaluation_speedup()) << '\n';
  }
}

}  // namespace ibba
