#include <cmath>

#include <gtest/gtest.h>

#include "aerostt/jet.hpp"

namespace {

using aerostt::Jet;
using J2 = Jet<double, 2>;

// f(u) with known first three derivatives, composed with u = x0 + t.
struct Case {
  const char* name;
  double x0;
  J2 (*f)(const J2&);
  double d[4];
};

J2 var(double v, std::size_t i) { return J2::variable(v, i); }

TEST(Jet, ElementaryFunctionsMatchClosedFormDerivatives) {
  const double x = 0.7;
  const Case cases[] = {
      {"sin", x, [](const J2& u) { return sin(u); }, {std::sin(x), std::cos(x), -std::sin(x), -std::cos(x)}},
      {"cos", x, [](const J2& u) { return cos(u); }, {std::cos(x), -std::sin(x), -std::cos(x), std::sin(x)}},
      {"exp", x, [](const J2& u) { return exp(u); }, {std::exp(x), std::exp(x), std::exp(x), std::exp(x)}},
      {"log", x, [](const J2& u) { return log(u); }, {std::log(x), 1 / x, -1 / (x * x), 2 / (x * x * x)}},
      {"sqrt",
       x,
       [](const J2& u) { return sqrt(u); },
       {std::sqrt(x), 0.5 / std::sqrt(x), -0.25 * std::pow(x, -1.5), 0.375 * std::pow(x, -2.5)}},
      {"reciprocal", x, [](const J2& u) { return reciprocal(u); }, {1 / x, -1 / (x * x), 2 / std::pow(x, 3), -6 / std::pow(x, 4)}},
      {"tan",
       x,
       [](const J2& u) { return tan(u); },
       {std::tan(x), 1 + std::tan(x) * std::tan(x), 2 * std::tan(x) * (1 + std::tan(x) * std::tan(x)),
        (2 + 6 * std::tan(x) * std::tan(x)) * (1 + std::tan(x) * std::tan(x))}},
  };
  for (const auto& c : cases) {
    const J2 y = c.f(var(c.x0, 0));
    EXPECT_NEAR(y.v, c.d[0], 1e-14) << c.name;
    EXPECT_NEAR(y.d1[0], c.d[1], 1e-13) << c.name;
    EXPECT_NEAR(y.hessian(0, 0), c.d[2], 1e-12) << c.name;
    EXPECT_NEAR(y.third(0, 0, 0), c.d[3], 1e-11) << c.name;
    EXPECT_EQ(y.d1[1], 0.0) << c.name;
  }
}

TEST(Jet, ChainRuleThroughComposition) {
  // exp(sin x): f' = c e, f'' = (c^2 - s) e, f''' = (c^3 - 3 s c - c) e
  const double x = -0.4, s = std::sin(x), c = std::cos(x), e = std::exp(s);
  const J2 y = exp(sin(var(x, 1)));
  EXPECT_NEAR(y.d1[1], c * e, 1e-14);
  EXPECT_NEAR(y.hessian(1, 1), (c * c - s) * e, 1e-14);
  EXPECT_NEAR(y.third(1, 1, 1), (c * c * c - 3 * s * c - c) * e, 1e-13);
}

TEST(Jet, MixedPartialsOfAProduct) {
  // f = x y^3 + x^2 / y
  const double x = 1.3, y = 0.6;
  const J2 X = var(x, 0), Y = var(y, 1);
  const J2 f = X * Y * Y * Y + X * X / Y;
  EXPECT_NEAR(f.v, x * y * y * y + x * x / y, 1e-14);
  EXPECT_NEAR(f.d1[0], y * y * y + 2 * x / y, 1e-13);
  EXPECT_NEAR(f.d1[1], 3 * x * y * y - x * x / (y * y), 1e-13);
  EXPECT_NEAR(f.hessian(0, 1), 3 * y * y - 2 * x / (y * y), 1e-13);
  EXPECT_NEAR(f.hessian(1, 0), f.hessian(0, 1), 0.0);
  EXPECT_NEAR(f.hessian(1, 1), 6 * x * y + 2 * x * x / (y * y * y), 1e-12);
  EXPECT_NEAR(f.third(0, 1, 1), 6 * y + 4 * x / (y * y * y), 1e-12);
  EXPECT_NEAR(f.third(1, 0, 1), f.third(0, 1, 1), 0.0);
  EXPECT_NEAR(f.third(0, 0, 1), -2 / (y * y), 1e-12);
  EXPECT_NEAR(f.third(1, 1, 1), 6 * x - 6 * x * x / std::pow(y, 4), 1e-11);
  EXPECT_NEAR(f.third(0, 0, 0), 0.0, 1e-14);
}

TEST(Jet, ConstantsCarryNoDerivatives) {
  const J2 k(3.0);
  const J2 y = sin(k) * exp(k);
  for (double d : y.d1) EXPECT_EQ(d, 0.0);
  for (double d : y.d2) EXPECT_EQ(d, 0.0);
  for (double d : y.d3) EXPECT_EQ(d, 0.0);
}

}  // namespace
