#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ddalab/analysis.hpp"

namespace an = ddalab::analysis;

TEST(Bisect, FindsSquareRootOfTwo) {
  const auto r = an::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, {1e-14});
  EXPECT_NEAR(r.root, std::sqrt(2.0), 1e-13);
  EXPECT_LE(r.lo, std::sqrt(2.0));
  EXPECT_GE(r.hi, std::sqrt(2.0));
}

TEST(Bisect, RejectsSameSignEnds) {
  EXPECT_THROW(an::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), an::BracketError);
}

TEST(Bisect, AcceptsRootAtEndpoint) {
  const auto r = an::bisect([](double x) { return x - 1.0; }, 1.0, 3.0);
  EXPECT_NEAR(r.root, 1.0, 1e-8);
}

TEST(BracketByDoubling, StopsAtFirstSignChange) {
  const auto [lo, hi] = an::bracket_by_doubling([](double x) { return x - 10.0; }, 1.0);
  EXPECT_DOUBLE_EQ(lo, 8.0);
  EXPECT_DOUBLE_EQ(hi, 16.0);
}

TEST(BracketByDoubling, GivesUpEventually) {
  EXPECT_THROW(an::bracket_by_doubling([](double) { return 1.0; }, 1.0, {1e-9, 20, 400}),
               an::BracketError);
}

TEST(AdaptiveSimpson, PolynomialsUpToCubicAreExact) {
  EXPECT_NEAR(an::adaptive_simpson([](double x) { return x * x * x - x; }, 0.0, 2.0), 2.0,
              1e-14);
}

TEST(AdaptiveSimpson, SmoothTranscendentalIntegrands) {
  EXPECT_NEAR(an::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi),
              2.0, 1e-10);
  EXPECT_NEAR(an::adaptive_simpson([](double x) { return std::exp(40.0 * x); }, 0.0, 1.0),
              std::expm1(40.0) / 40.0, 1e-9 * std::exp(40.0) / 40.0);
}

TEST(FdDerivative, ErrorShrinksLinearlyWithStep) {
  auto f = [](double x) { return std::exp(x); };
  const double e1 = std::abs(an::fd_derivative(f, 0.0, 1e-3) - 1.0);
  const double e2 = std::abs(an::fd_derivative(f, 0.0, 5e-4) - 1.0);
  EXPECT_NEAR(e1 / e2, 2.0, 0.01);
}
