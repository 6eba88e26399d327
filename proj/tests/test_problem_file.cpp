#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ibba/fixtures.hpp"
#include "ibba/problem_file.hpp"

using namespace ibba;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ProblemFileError& e) {
    return e.line();
  }
  return 999;
}

}  // namespace

TEST(ProblemFile, ParsesAllFields) {
  const auto p = parse_problem(
      "# comment\n"
      "name = demo\n"
      "domain = -1, 2.5\n"
      "reference = 0.5, -3\n"
      "\n"
      "[constraint]\n"
      "expr = x - 1\n"
      "K = 1.5\n"
      "[constraint]\n"
      "expr = sqrt(1 - x)\n"
      "K = 40\n"
      "partial = true\n"
      "[objective]\n"
      "expr = x^2\n"
      "K = 6\n");
  EXPECT_EQ(p.name(), "demo");
  EXPECT_EQ(p.a(), -1.0);
  EXPECT_EQ(p.b(), 2.5);
  ASSERT_TRUE(p.reference().has_value());
  EXPECT_EQ(p.reference()->f, -3.0);
  ASSERT_EQ(p.constraint_count(), 2u);
  EXPECT_EQ(p.level(1).function.source(), "x - 1");
  EXPECT_TRUE(p.level(2).partial);
  EXPECT_FALSE(p.level(1).partial);
  EXPECT_EQ(p.objective().K, 6.0);
}

TEST(ProblemFile, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("name = a\ndomain = 0, 1\n[objective]\nexpr = sin(x))\nK = 1\n"), 4u);
  EXPECT_EQ(error_line("name = a\ndomain = 0 1\n"), 2u);
  EXPECT_EQ(error_line("name = a\n[bogus]\n"), 2u);
  EXPECT_EQ(error_line("name = a\ndomain = 0, 1\n[objective]\nexpr = x\nK = one\n"), 5u);
  EXPECT_EQ(error_line("name = a\ndomain = 0, 1\n[objective]\nexpr = x\nK = 1\n[constraint]\n"), 6u);
  EXPECT_EQ(error_line("name = a\ncolor = red\n"), 2u);
  EXPECT_EQ(error_line("name = a\ndomain = 0, 1\n[objective]\nK = 1\n"), 3u);
}

TEST(ProblemFile, ExpressionErrorsReportColumn) {
  try {
    parse_problem("name = a\ndomain = 0, 1\n[objective]\nexpr = 4x\nK = 1\n");
    FAIL();
  } catch (const ProblemFileError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4: column 9"), std::string::npos) << e.what();
  }
}

TEST(ProblemFile, WholeFileErrors) {
  EXPECT_EQ(error_line("domain = 0, 1\n[objective]\nexpr = x\nK = 1\n"), 0u);
  EXPECT_EQ(error_line("name = a\n[objective]\nexpr = x\nK = 1\n"), 0u);
  EXPECT_EQ(error_line("name = a\ndomain = 0, 1\n"), 0u);
  EXPECT_THROW(parse_problem("name = a\ndomain = 1, 0\n[objective]\nexpr = x\nK = 1\n"), ProblemFileError);
  EXPECT_THROW(parse_problem("name = a\ndomain = 0, 1\n[objective]\nexpr = x\nK = 0\n"), ProblemFileError);
}

TEST(ProblemFile, RoundTripProblemSeven) {
  const auto p = fixtures::problem7();
  const auto text = format_problem(p);
  const auto q = parse_problem(text);
  EXPECT_TRUE(same_problem(p, q));
  EXPECT_EQ(format_problem(q), text);
}

TEST(ProblemFile, RoundTripBattery) {
  for (const auto& g : fixtures::generate_battery()) {
    const auto q = parse_problem(format_problem(g.spec));
    EXPECT_TRUE(same_problem(g.spec, q)) << g.spec.name();
  }
}

TEST(ProblemFile, RoundTripKeepsPartialFlagAndOrder) {
  const ProblemSpec p("order", 0.1, 0.30000000000000004,
                      {{Expression::parse("x - 0.2"), 1.0000000000000002, false},
                       {Expression::parse("sqrt(0.2 - x)"), 3, true}},
                      {Expression::parse("-x"), 1, false});
  const auto q = parse_problem(format_problem(p));
  EXPECT_TRUE(same_problem(p, q));
  EXPECT_EQ(q.b(), 0.30000000000000004);
  EXPECT_EQ(q.level(1).K, 1.0000000000000002);
}

TEST(ProblemFile, SameProblemDetectsDifferences) {
  const auto p = fixtures::problem7();
  fixtures::Problem7Constants k;
  k.K_f = 7.5;
  EXPECT_FALSE(same_problem(p, fixtures::problem7(k)));
}

TEST(ProblemFile, ShippedProblemSevenMatchesFixture) {
  EXPECT_TRUE(same_problem(load_problem(std::string(IBBA_DATA_DIR) + "/problems/problem7.txt"),
                           fixtures::problem7()));
}
