#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ibba/expression.hpp"

namespace ibba {

template <class Fn>
concept UnivariateFunction = std::copy_constructible<Fn> && requires(const Fn& f, double x) {
  { f(x) } -> std::convertible_to<double>;
};

/// One function of the chain g_1, ..., g_m, f together with its Lipschitz
/// overestimate K. `partial` marks functions only defined where the preceding
/// constraints hold; the index scheme never evaluates them elsewhere.
template <UnivariateFunction Fn>
struct LipschitzFunction {
  Fn function;
  double K = 0.0;
  bool partial = false;
};

struct ReferenceSolution {
  double x = 0.0;
  double f = 0.0;
};

// min f(x) over [a,b] subject to g_j(x) <= 0, j = 1..m, with the constraint
// order fixed at construction. Levels are numbered 1..m+1; level m+1 is f.
template <UnivariateFunction Fn>
class Problem {
 public:
  using function_type = Fn;

  Problem(std::string name, double a, double b, std::vector<LipschitzFunction<Fn>> constraints,
          LipschitzFunction<Fn> objective, std::optional<ReferenceSolution> reference = {})
      : name_(std::move(name)),
        a_(a),
        b_(b),
        constraints_(std::move(constraints)),
        objective_(std::move(objective)),
        reference_(reference) {}

  const std::string& name() const noexcept { return name_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t constraint_count() const noexcept { return constraints_.size(); }
  std::size_t level_count() const noexcept { return constraints_.size() + 1; }
  std::span<const LipschitzFunction<Fn>> constraints() const noexcept { return constraints_; }
  const LipschitzFunction<Fn>& objective() const noexcept { return objective_; }
  const std::optional<ReferenceSolution>& reference() const noexcept { return reference_; }

  /// 1-based: level(j) is g_j for j <= m and f for j == m+1.
  const LipschitzFunction<Fn>& level(std::size_t j) const {
    if (j == 0 || j > level_count()) throw std::out_of_range("level index out of range");
    return j <= constraints_.size() ? constraints_[j - 1] : objective_;
  }

  /// Overestimates K_1..K_{m+1}, indexed from 0.
  std::vector<double> overestimates() const {
    std::vector<double> K;
    K.reserve(level_count());
    for (const auto& c : constraints_) K.push_back(c.K);
    K.push_back(objective_.K);
    return K;
  }

 private:
  std::string name_;
  double a_;
  double b_;
  std::vector<LipschitzFunction<Fn>> constraints_;
  LipschitzFunction<Fn> objective_;
  std::optional<ReferenceSolution> reference_;
};

using ProblemSpec = Problem<Expression>;

/// Structural checks only; never evaluates the functions. Empty result = ok.
template <UnivariateFunction Fn>
std::vector<std::string> validate(const Problem<Fn>& problem) {
  std::vector<std::string> errors;
  if (!std::isfinite(problem.a()) || !std::isfinite(problem.b())) {
    errors.emplace_back("non-finite domain endpoint");
  } else if (!(problem.a() < problem.b())) {
    errors.emplace_back("empty domain: a must be less than b");
  }
  for (std::size_t j = 1; j <= problem.level_count(); ++j) {
    const double K = problem.level(j).K;
    const std::string which =
        j <= problem.constraint_count() ? "g_" + std::to_string(j) : std::string("f");
    if (std::isnan(K) || K <= 0.0) {
      errors.push_back("nonpositive overestimate K for " + which);
    } else if (!std::isfinite(K)) {
      errors.push_back("non-finite overestimate K for " + which);
    }
  }
  return errors;
}

template <UnivariateFunction Fn>
void require_valid(const Problem<Fn>& problem) {
  const auto errors = validate(problem);
  if (errors.empty()) return;
  std::string message = "invalid problem '" + problem.name() + "':";
  for (const auto& e : errors) message += " " + e + ";";
  throw std::invalid_argument(message);
}

// Trial counts per index level. N_{g_j} counts trials whose last evaluated
// function was g_j; N_f counts trials that reached the objective.
class EvaluationLedger {
 public:
  EvaluationLedger() = default;
  explicit EvaluationLedger(std::size_t constraint_count) : constraint_trials_(constraint_count) {}

  void record_trial(std::size_t index) {
    if (index == 0 || index > constraint_trials_.size() + 1) {
      throw std::out_of_range("trial index " + std::to_string(index) + " outside [1, " +
                              std::to_string(constraint_trials_.size() + 1) + "]");
    }
    if (index <= constraint_trials_.size()) {
      ++constraint_trials_[index - 1];
    } else {
      ++objective_trials_;
    }
    ++iterations_;
  }

  std::size_t constraint_count() const noexcept { return constraint_trials_.size(); }
  /// N_{g_j}, 1-based.
  std::size_t constraint_trials(std::size_t j) const { return constraint_trials_.at(j - 1); }
  std::size_t objective_trials() const noexcept { return objective_trials_; }
  std::size_t iterations() const noexcept { return iterations_; }

  /// sum_j j * N_{g_j} + (m+1) * N_f: a trial of index v costs v evaluations.
  std::size_t weighted_evaluations() const noexcept {
    std::size_t total = 0;
    for (std::size_t j = 0; j < constraint_trials_.size(); ++j) {
      total += (j + 1) * constraint_trials_[j];
    }
    return total + (constraint_trials_.size() + 1) * objective_trials_;
  }

  void merge(const EvaluationLedger& other) {
    if (other.constraint_trials_.size() != constraint_trials_.size()) {
      throw std::invalid_argument("ledger level mismatch");
    }
    for (std::size_t j = 0; j < constraint_trials_.size(); ++j) {
      constraint_trials_[j] += other.constraint_trials_[j];
    }
    objective_trials_ += other.objective_trials_;
    iterations_ += other.iterations_;
  }

  friend bool operator==(const EvaluationLedger&, const EvaluationLedger&) = default;

 private:
  std::vector<std::size_t> constraint_trials_;
  std::size_t objective_trials_ = 0;
  std::size_t iterations_ = 0;
};

}  // namespace ibba
