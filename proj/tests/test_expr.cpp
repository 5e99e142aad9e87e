#include <gtest/gtest.h>

#include <cmath>

#include "curved/expr.hpp"

using curved::DomainError;
using curved::expr::Expression;

TEST(Expression, ArithmeticAndPrecedence) {
  EXPECT_EQ(Expression::parse("1 + 2 * 3")(0, 0), 7.0);
  EXPECT_EQ(Expression::parse("(1 + 2) * 3")(0, 0), 9.0);
  EXPECT_EQ(Expression::parse("2 ^ 3 ^ 2")(0, 0), 512.0);
  EXPECT_EQ(Expression::parse("-u^2")(3, 0), -9.0);
  EXPECT_EQ(Expression::parse("8 / 4 / 2")(0, 0), 1.0);
  EXPECT_EQ(Expression::parse("10 - 4 - 3")(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1.5e-1 * v")(0, 2), 0.3);
}

TEST(Expression, VariablesAndFunctions) {
  const Expression e = Expression::parse("1 + 0.2*u + 0.1*v^2");
  EXPECT_DOUBLE_EQ(e(1, 2), 1.6);
  EXPECT_EQ(e.source(), "1 + 0.2*u + 0.1*v^2");
  EXPECT_DOUBLE_EQ(Expression::parse("exp(log(u)) + sin(v)^2 + cos(v)^2")(2.5, 0.7), 3.5);
}

TEST(Expression, Errors) {
  for (const char* bad : {"", "1 +", "(u", "u)", "w", "sin u", "2 ** 3", "tan(u)", "1..2"}) {
    EXPECT_THROW(Expression::parse(bad), DomainError) << bad;
  }
}
