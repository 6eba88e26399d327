// Build a problem in code, solve it with IBBA and with the penalty baseline,
// and print both reports.

#include <iostream>

#include "ibba/ibba.hpp"

int main() {
  using ibba::Expression;

  // min (x - 1)^2 + 0.3 sin(5x) on [-2, 3] subject to cos(2x) + 0.2 <= 0
  const ibba::ProblemSpec spec("demo", -2.0, 3.0,
                               {{Expression::parse("cos(2*x) + 0.2"), 2.5, false}},
                               {Expression::parse("(x - 1)^2 + 0.3*sin(5*x)"), 9.0, false});

  const auto outcome = ibba::solve(spec);
  ibba::write_report(std::cout, ibba::make_report(spec, outcome));
  std::cout << '\n';

  const double eps = outcome.epsilon;
  const auto pen = ibba::tune_penalty(spec, ibba::PenaltyConfig{}, eps);
  ibba::write_report(std::cout, ibba::make_report(spec, pen, eps));

  return outcome.status == ibba::SolveStatus::AccuracyReached ? 0 : 1;
}
