#include <cstddef>
#include <memory>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ibba/fixtures.hpp"
#include "ibba/index_scheme.hpp"

using ibba::Trial;
using ibba::ZStar;

namespace {

// Wraps an expression and counts calls into a shared counter.
struct Counting {
  ibba::Expression f;
  std::shared_ptr<std::size_t> calls = std::make_shared<std::size_t>(0);
  double operator()(double x) const {
    ++*calls;
    return f(x);
  }
};

}  // namespace

TEST(EvaluateIndex, ProblemSevenAtTwoStopsAtFirstConstraint) {
  const auto p = ibba::fixtures::problem7();
  const Trial t = ibba::evaluate_index(p, 2.0);
  EXPECT_EQ(t.index, 1u);
  EXPECT_NEAR(t.raw, 1.4941833723776927, 1e-12);
}

TEST(EvaluateIndex, ProblemSevenReferencePointIsFeasible) {
  const auto p = ibba::fixtures::problem7();
  const Trial t = ibba::evaluate_index(p, -0.774575);
  EXPECT_EQ(t.index, 3u);
  EXPECT_NEAR(t.raw, -0.47704013308698223, 1e-12);
  EXPECT_LE(p.level(1).function(-0.774575), 0.0);
  EXPECT_LE(p.level(2).function(-0.774575), 0.0);
}

TEST(EvaluateIndex, UnconstrainedAlwaysReachesObjective) {
  const ibba::ProblemSpec p("u", 0, 1, {}, {ibba::Expression::parse("x-5"), 1, false});
  for (double x : {0.0, 0.5, 1.0}) {
    const Trial t = ibba::evaluate_index(p, x);
    EXPECT_EQ(t.index, 1u);
    EXPECT_EQ(t.raw, x - 5);
  }
}

TEST(EvaluateIndex, ExactlyNuEvaluations) {
  std::vector<ibba::LipschitzFunction<Counting>> constraints;
  for (const char* g : {"sin(3*x)", "cos(5*x) - 0.2", "x - 0.7"}) {
    constraints.push_back({Counting{ibba::Expression::parse(g)}, 10.0, false});
  }
  const Counting f{ibba::Expression::parse("x^2")};
  const ibba::Problem<Counting> p("count", -2, 2, constraints, {f, 10.0, false});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xs(-2, 2);
  std::size_t seen[5] = {};
  for (int i = 0; i < 2000; ++i) {
    std::size_t before = *f.calls;
    for (const auto& c : p.constraints()) before += *c.function.calls;
    ibba::EvaluationLedger ledger(3);
    const Trial t = ibba::evaluate_index(p, xs(rng), 0, ledger);
    std::size_t after = *f.calls;
    for (const auto& c : p.constraints()) after += *c.function.calls;
    EXPECT_EQ(after - before, t.index);
    EXPECT_EQ(ledger.iterations(), 1u);
    EXPECT_EQ(ledger.weighted_evaluations(), t.index);
    if (t.index <= 3) {
      EXPECT_GT(t.raw, 0.0);
    }
    ++seen[t.index];
  }
  for (std::size_t level = 1; level <= 4; ++level) EXPECT_GT(seen[level], 0u) << level;
}

TEST(EvaluateIndex, EvaluationErrorsAbortTheTrial) {
  const ibba::ProblemSpec p("e", -1, 1, {{ibba::Expression::parse("log(x)"), 1, false}},
                            {ibba::Expression::parse("x"), 1, false});
  try {
    ibba::evaluate_index(p, -0.5);
    FAIL();
  } catch (const ibba::TrialError& e) {
    EXPECT_EQ(e.level(), 1u);
    EXPECT_EQ(e.x(), -0.5);
  }
}

TEST(EvaluateIndex, PartialConstraintNeverEvaluatedOutsideItsDomain) {
  const ibba::ProblemSpec p("partial", 0, 1,
                            {{ibba::Expression::parse("x - 0.5"), 1.5, false},
                             {ibba::Expression::parse("sqrt(0.5 - x) - 0.2"), 100, true}},
                            {ibba::Expression::parse("x"), 1.5, false});
  EXPECT_EQ(ibba::evaluate_index(p, 0.9).index, 1u);
  EXPECT_EQ(ibba::evaluate_index(p, 0.1).index, 2u);
  EXPECT_EQ(ibba::evaluate_index(p, 0.49).index, 3u);
}

TEST(PhiValue, Cases) {
  ZStar z;
  EXPECT_EQ(ibba::phi_value(Trial{0, 1, 0.7, 0}, z, 2), 0.7);
  EXPECT_THROW(ibba::phi_value(Trial{0, 3, 0.7, 0}, z, 2), std::logic_error);
  z.update(Trial{0, 3, 5.46160556, 0}, 2);
  EXPECT_EQ(ibba::phi_value(Trial{0, 3, 5.46160556, 0}, z, 2), 0.0);
  EXPECT_EQ(ibba::phi_value(Trial{0, 3, 6.0, 0}, z, 2), 6.0 - 5.46160556);
}

TEST(ZStarUpdate, Cases) {
  ZStar z;
  EXPECT_FALSE(z.present());
  EXPECT_THROW(z.value(), std::logic_error);
  EXPECT_TRUE(z.update(Trial{0.1, 3, 1.0, 4}, 2));
  EXPECT_EQ(z.value(), 1.0);
  EXPECT_EQ(z.witness(), 4u);
  EXPECT_FALSE(z.update(Trial{0.2, 2, 0.3, 5}, 2));
  EXPECT_EQ(z.value(), 1.0);
  EXPECT_FALSE(z.update(Trial{0.3, 3, 1.0, 6}, 2));
  EXPECT_EQ(z.witness(), 4u);
  EXPECT_TRUE(z.update(Trial{0.4, 3, 0.5, 7}, 2));
  EXPECT_EQ(z.value(), 0.5);
}
