#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ifem/taylor.hpp"

using namespace ifem;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST(Taylor2, PolynomialDerivativesByHand) {
  // f = x y + x^2 at (1, 2)
  const Taylor2 x = Taylor2::variable(1.0, 0, 4);
  const Taylor2 y = Taylor2::variable(2.0, 1, 4);
  const Taylor2 f = x * y + x * x;
  EXPECT_DOUBLE_EQ(f.value(), 3.0);
  EXPECT_DOUBLE_EQ(f.derivative(1, 0), 4.0);
  EXPECT_DOUBLE_EQ(f.derivative(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(f.derivative(2, 0), 2.0);
  EXPECT_DOUBLE_EQ(f.derivative(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(f.derivative(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(f.derivative(3, 0), 0.0);
}

TEST(Taylor2, ElementaryFunctionsMatchClosedFormDerivatives) {
  const double v = 0.7;
  const int order = 6;
  const Taylor2 s = Taylor2::variable(v, 0, order);
  const Taylor2 e = exp(s), l = log(s), sn = sin(s), cs = cos(s), sq = sqrt(s), pw = pow(s, 2.5);
  for (int m = 0; m <= order; ++m) {
    EXPECT_NEAR(e.derivative(m, 0), std::exp(v), 1e-12 * std::exp(v));
    if (m >= 1) {
      const double dl = (m % 2 == 1 ? 1.0 : -1.0) * factorial(m - 1) / std::pow(v, m);
      EXPECT_NEAR(l.derivative(m, 0), dl, 1e-11 * std::abs(dl));
    }
    EXPECT_NEAR(sn.derivative(m, 0), std::sin(v + m * M_PI / 2), 1e-12);
    EXPECT_NEAR(cs.derivative(m, 0), std::cos(v + m * M_PI / 2), 1e-12);
    double falling = 1.0, falling_p = 1.0;
    for (int i = 0; i < m; ++i) {
      falling *= 0.5 - i;
      falling_p *= 2.5 - i;
    }
    EXPECT_NEAR(sq.derivative(m, 0), falling * std::pow(v, 0.5 - m), 1e-10 * std::abs(falling * std::pow(v, 0.5 - m)));
    EXPECT_NEAR(pw.derivative(m, 0), falling_p * std::pow(v, 2.5 - m), 1e-10 * std::abs(falling_p * std::pow(v, 2.5 - m)) + 1e-13);
  }
}

TEST(Taylor2, GeometricSeriesFromDivision) {
  const Taylor2 s = Taylor2::variable(0.0, 0, 8);
  const Taylor2 g = Taylor2(1.0) / (Taylor2(1.0) + s);
  for (int m = 0; m <= 8; ++m) EXPECT_NEAR(g.coeff(m, 0), m % 2 == 0 ? 1.0 : -1.0, 1e-14);
}

TEST(Taylor2, RadiusGradientAndHessian) {
  const double x0 = 0.3, y0 = -0.4;
  const Taylor2 x = Taylor2::variable(x0, 0, 3), y = Taylor2::variable(y0, 1, 3);
  const Taylor2 r = sqrt(x * x + y * y);
  const double r0 = 0.5;
  EXPECT_NEAR(r.derivative(1, 0), x0 / r0, 1e-14);
  EXPECT_NEAR(r.derivative(0, 1), y0 / r0, 1e-14);
  EXPECT_NEAR(r.derivative(2, 0), y0 * y0 / (r0 * r0 * r0), 1e-13);
  EXPECT_NEAR(r.derivative(1, 1), -x0 * y0 / (r0 * r0 * r0), 1e-13);
}

TEST(Taylor2, RandomProductsMatchFiniteDifferences) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), x0 = u(rng), y0 = u(rng);
    auto f = [&](double x, double y) { return std::exp(a * x) * std::sin(b * y + x) + x * x * y; };
    const Taylor2 X = Taylor2::variable(x0, 0, 2), Y = Taylor2::variable(y0, 1, 2);
    const Taylor2 F = exp(a * X) * sin(b * Y + X) + X * X * Y;
    const double h = 1e-4;
    const double fxy = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h) + f(x0 - h, y0 - h)) / (4 * h * h);
    EXPECT_NEAR(F.derivative(1, 1), fxy, 1e-6);
    EXPECT_NEAR(F.derivative(1, 0), (f(x0 + h, y0) - f(x0 - h, y0)) / (2 * h), 1e-7);
  }
}

TEST(Taylor2, TruncatedOrdersCombine) {
  const Taylor2 a = Taylor2::variable(1.0, 0, 2);
  const Taylor2 b = Taylor2::variable(2.0, 1, 5);
  const Taylor2 c = a * b;
  EXPECT_EQ(c.order(), 2);
  EXPECT_EQ(Taylor2(3.0).order(), Taylor2::kMaxOrder);
}

TEST(Series, CauchyProductAndDerivative) {
  Series a = Series::constant(1.0, 3), b = Series::constant(1.0, 3);
  a.coeff(1) = 1.0;
  b.coeff(1) = -1.0;
  const Series p = a * b;  // 1 - s^2
  EXPECT_DOUBLE_EQ(p.coeff(0), 1.0);
  EXPECT_DOUBLE_EQ(p.coeff(1), 0.0);
  EXPECT_DOUBLE_EQ(p.coeff(2), -1.0);
  EXPECT_DOUBLE_EQ(p.derivative(2), -2.0);
  const Series d = p.derivative_series();
  EXPECT_EQ(d.depth(), p.depth() - 1);
  EXPECT_DOUBLE_EQ(d.coeff(1), -2.0);
}

TEST(Series, DerivativesRoundTrip) {
  const std::vector<double> d = {1.0, -2.0, 6.0, 24.0};
  const Series s = Series::from_derivatives(d);
  for (int m = 0; m < 4; ++m) EXPECT_NEAR(s.derivative(m), d[static_cast<std::size_t>(m)], 1e-13);
  EXPECT_EQ(s.truncated(1).depth(), 1);
}

TEST(Series, FromTaylorKeepsPureSigmaPart) {
  const Taylor2 x = Taylor2::variable(0.2, 0, 4), y = Taylor2::variable(0.0, 1, 4);
  const Series s = Series::from_taylor(sin(x) + y, 3);
  for (int m = 0; m <= 3; ++m) EXPECT_NEAR(s.derivative(m), std::sin(0.2 + m * M_PI / 2), 1e-14);
}

TEST(Series, CentralDifferencesOfSine) {
  const Series s = series_by_central_differences([](double t) { return std::sin(t); }, 0.4, 3, 1e-2);
  for (int m = 0; m <= 3; ++m) EXPECT_NEAR(s.derivative(m), std::sin(0.4 + m * M_PI / 2), 1e-7);
}
