#pragma once

// Built-in problems: differentiable Problem 7 and a seeded battery of
// trigonometric-polynomial problems with analytic Lipschitz bounds.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ibba/expression.hpp"
#include "ibba/problem.hpp"

namespace ibba::fixtures {

inline constexpr const char* kProblem7Objective = "exp(-cos(4*x-3))+(4*x-3)^2/250-1";
inline constexpr const char* kProblem7G1 = "sin(x)^3*exp(-sin(3*x))+1/2";
inline constexpr const char* kProblem7G2 = "cos(7/5*(x+3))-sin(7*(x+3))+3/10";

struct Problem7Constants {
  double K_g1 = 6.5;  // grid estimate of L: 5.3593
  double K_g2 = 9.5;  // analytic bound 1.4 + 7 = 8.4
  double K_f = 7.0;   // analytic bound 6.31
};

/// min exp(-cos(4x-3)) + (4x-3)^2/250 - 1 on [-3, 2] subject to
/// sin^3(x) exp(-sin(3x)) + 1/2 <= 0 and cos(7(x+3)/5) - sin(7(x+3)) + 3/10 <= 0.
inline ProblemSpec problem7(const Problem7Constants& K = {}) {
  return ProblemSpec("problem7", -3.0, 2.0,
                     {{Expression::parse(kProblem7G1), K.K_g1, false},
                      {Expression::parse(kProblem7G2), K.K_g2, false}},
                     {Expression::parse(kProblem7Objective), K.K_f, false},
                     ReferenceSolution{-0.774575, -0.33007410});
}

struct GeneratedProblem {
  ProblemSpec spec;
  std::vector<double> lipschitz_bounds;  // analytic upper bounds on L_1..L_{m+1}
};

namespace detail {

// Portable uniform draws from the standardized mt19937_64 stream.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  /// Rounded to three decimals so the printed expression is exact.
  double coefficient(double lo, double hi) { return std::round(uniform(lo, hi) * 1000.0) / 1000.0; }

 private:
  std::mt19937_64 engine_;
};

inline std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string signed_term(double v) { return v < 0 ? "-" + fixed3(-v) : "+" + fixed3(v); }

inline double round_up(double v, double unit) { return std::ceil(v / unit) * unit; }

}  // namespace detail

/// Problem `id` of the battery seeded by `seed`. The objective is
/// sum_k c_k sin(w_k x + p_k) + d |x - x0|; the constraints (1 + id % 3 of
/// them) are sum_k b_k cos(e_k x + q_k) + s. Every coefficient is printed with
/// three decimals, so the expression text is the exact problem. Each K is
/// margin * (analytic Lipschitz bound), rounded up to 0.01.
inline GeneratedProblem generate_problem(std::size_t id, std::uint64_t seed = 20240601,
                                         double margin = 1.2) {
  using detail::fixed3;
  using detail::signed_term;
  detail::Draw draw(seed ^ (0x9E3779B97F4A7C15ULL * (id + 1)));
  const double a = std::round(draw.uniform(-5.0, 0.0) * 10.0) / 10.0;
  const double b = a + std::round(draw.uniform(4.0, 8.0) * 10.0) / 10.0;
  const std::size_t m = 1 + id % 3;

  std::vector<double> bounds;
  std::vector<LipschitzFunction<Expression>> constraints;
  for (std::size_t j = 0; j < m; ++j) {
    std::string text;
    double L = 0.0;
    double total = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double coef = draw.coefficient(0.2, 1.0) * (draw.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
      const double freq = draw.coefficient(0.5, 5.0);
      const double phase = draw.coefficient(0.0, 6.283);
      text += signed_term(coef) + "*cos(" + fixed3(freq) + "*x+" + fixed3(phase) + ")";
      L += std::fabs(coef) * freq;
      total += std::fabs(coef);
    }
    const double shift = std::round(draw.uniform(-0.6, 0.1) * total * 1000.0) / 1000.0;
    text += signed_term(shift);
    if (text.front() == '+') text.erase(0, 1);
    bounds.push_back(L);
    constraints.push_back({Expression::parse(text), detail::round_up(margin * L, 0.01), false});
  }

  std::string objective;
  double L = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double coef = draw.coefficient(0.1, 1.0) * (draw.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    const double freq = draw.coefficient(0.5, 4.0);
    const double phase = draw.coefficient(0.0, 6.283);
    objective += signed_term(coef) + "*sin(" + fixed3(freq) + "*x+" + fixed3(phase) + ")";
    L += std::fabs(coef) * freq;
  }
  const double d = draw.coefficient(0.02, 0.2);
  const double x0 = std::round(draw.uniform(a, b) * 1000.0) / 1000.0;
  objective += "+" + fixed3(d) + "*abs(x" + signed_term(-x0) + ")";
  if (objective.front() == '+') objective.erase(0, 1);
  L += d;
  bounds.push_back(L);

  char name[32];
  std::snprintf(name, sizeof name, "battery-%02zu", id + 1);
  GeneratedProblem out{ProblemSpec(name, a, b, std::move(constraints),
                                   {Expression::parse(objective), detail::round_up(margin * L, 0.01), false}),
                       std::move(bounds)};
  return out;
}

inline std::vector<GeneratedProblem> generate_battery(std::size_t count = 10,
                                                      std::uint64_t seed = 20240601) {
  std::vector<GeneratedProblem> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_problem(i, seed));
  return out;
}

}  // namespace ibba::fixtures
