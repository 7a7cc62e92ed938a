#include <gtest/gtest.h>

#include <cmath>

#include "ifem/jump_calculus.hpp"
#include "oracles.hpp"

using namespace ifem;
using oracle::TwoSided;

namespace {

constexpr double kR = 0.7;
const Vec2 kC{0.1, -0.05};

JumpSeeds circle_seeds(double s0, int k) {
  JumpSeeds seeds;
  seeds.value = oracle::circle_normal_series(kC, kR, s0, 0, k, TwoSided::minus, TwoSided::plus);
  seeds.normal = oracle::circle_normal_series(kC, kR, s0, 1, k - 1, TwoSided::minus, TwoSided::plus);
  for (int b = 0; b <= k - 2; ++b)
    seeds.source.push_back(oracle::circle_normal_series(kC, kR, s0, b, k - 2 - b, TwoSided::g_minus, TwoSided::g_plus));
  return seeds;
}

// Same quantities along a straight line: X(s) = o + s t, constant normal.
Series line_series(const Vec2& o, const Vec2& t, const Vec2& n, double s0, int b, int depth,
                   Taylor2 (*qm)(const Taylor2&, const Taylor2&), Taylor2 (*qp)(const Taylor2&, const Taylor2&)) {
  const int order = depth + b;
  const Taylor2 sig = Taylor2::variable(s0, 0, order), nu = Taylor2::variable(0.0, 1, order);
  const Taylor2 X = o.x + t.x * sig + n.x * nu, Y = o.y + t.y * sig + n.y * nu;
  const Taylor2 J = qp(X, Y) - qm(X, Y);
  Series s(depth);
  double fb = 1.0;
  for (int i = 2; i <= b; ++i) fb *= i;
  for (int m = 0; m <= depth; ++m) s.coeff(m) = J.coeff(m, b) * fb;
  return s;
}

void expect_table_matches(const JumpTable& t, const Vec2& x0, const Vec2& tan, const Vec2& n, int k) {
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b) {
      const double expect = oracle::fixed_frame_jump(x0, tan, n, a, b);
      EXPECT_NEAR(t(a, b), expect, 1e-10 * std::max(1.0, std::abs(expect))) << "a=" << a << " b=" << b;
    }
}

}  // namespace

TEST(JumpRecurrence, CircleMatchesFixedFrameDifferentiation) {
  for (int k = 0; k <= 6; ++k) {
    for (double s0 : {0.0, 0.9, 2.3, 4.0}) {
      const double th = s0 / kR;
      const Vec2 n{std::cos(th), std::sin(th)};
      const JumpTable t = build_jump_table(circle_seeds(s0, k), Series::constant(1.0 / kR, std::max(k - 1, 0)), k);
      expect_table_matches(t, kC + kR * n, rot90(n), n, k);
    }
  }
}

TEST(JumpRecurrence, ProviderPathOnCircleCurve) {
  const CircleCurve curve(kC.x, kC.y, kR);
  ScalarJumpData data;
  data.value = [](double s, int d) { return oracle::circle_normal_series(kC, kR, s, 0, d, TwoSided::minus, TwoSided::plus); };
  data.normal = [](double s, int d) { return oracle::circle_normal_series(kC, kR, s, 1, d, TwoSided::minus, TwoSided::plus); };
  data.source = [](double s, int b, int d) {
    return oracle::circle_normal_series(kC, kR, s, b, d, TwoSided::g_minus, TwoSided::g_plus);
  };
  const JumpTable t = build_jump_table(data, curve, 1.7, 5);
  EXPECT_NEAR(curve.phi(t.point), 0.0, 1e-15);
  EXPECT_NEAR(t.curvature, 1.0 / kR, 1e-12);
  EXPECT_NEAR(t.arc, 1.7, 0.0);
  expect_table_matches(t, t.point, t.tangent, t.normal, 5);
}

TEST(JumpRecurrence, LineHasNoCurvatureTerms) {
  const LineCurve line(1.0, 2.0, 0.3);
  ScalarJumpData data;
  const Vec2 n = line.normal({0, 0}), tan = rot90(n), o = line.point_at(0.0);
  data.value = [=](double s, int d) { return line_series(o, tan, n, s, 0, d, TwoSided::minus, TwoSided::plus); };
  data.normal = [=](double s, int d) { return line_series(o, tan, n, s, 1, d, TwoSided::minus, TwoSided::plus); };
  data.source = [=](double s, int b, int d) { return line_series(o, tan, n, s, b, d, TwoSided::g_minus, TwoSided::g_plus); };
  for (double s : {-0.5, 0.4}) {
    const JumpTable t = build_jump_table(data, line, s, 4);
    expect_table_matches(t, line.point_at(s), tan, n, 4);
  }
}

TEST(JumpRecurrence, MissingOrShallowDataFails) {
  const CircleCurve curve(0, 0, 0.5);
  ScalarJumpData none;
  EXPECT_THROW(build_jump_table(none, curve, 0.0, 2), DataError);
  JumpSeeds seeds = circle_seeds(0.3, 3);
  seeds.value = seeds.value.truncated(1);
  EXPECT_THROW(build_jump_table(seeds, Series::constant(1.0, 2), 3), DataError);
  // zero data gives a zero table
  ScalarJumpData zero;
  zero.normal = [](double, int d) { return Series::constant(0.0, d); };
  const JumpTable t = build_jump_table(zero, curve, 0.0, 3);
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b) EXPECT_EQ(t(a, b), 0.0);
  EXPECT_THROW(t(2, 2), std::out_of_range);
}

TEST(JumpRotation, EtaDerivativesMatchDirectExpansion) {
  const double s0 = 0.9, th = s0 / kR;
  const Vec2 n{std::cos(th), std::sin(th)}, tan = rot90(n), x0 = kC + kR * n;
  const JumpTable t = build_jump_table(circle_seeds(s0, 4), Series::constant(1.0 / kR, 3), 4);
  for (double ang : {0.0, 0.4, 1.3, 2.8}) {
    const double a = std::cos(ang), b = std::sin(ang);
    const Vec2 eta = a * n + b * tan;
    for (int l = 0; l <= 4; ++l) {
      const Taylor2 lam = Taylor2::variable(0.0, 0, l);
      const Taylor2 X = x0.x + eta.x * lam, Y = x0.y + eta.y * lam;
      const double expect = (TwoSided::plus(X, Y) - TwoSided::minus(X, Y)).derivative(l, 0);
      EXPECT_NEAR(rotate_jumps_to_eta(t, a, b, l), expect, 1e-10 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST(PoissonJumpData, NormalJumpIsMinusBeta) {
  const ScalarJumpData d =
      poisson_jump_data([](double, int depth) { return Series::constant(2.0, depth); }, nullptr);
  EXPECT_EQ(d.normal(0.0, 2).value(), -2.0);
  EXPECT_FALSE(static_cast<bool>(d.value));
  EXPECT_FALSE(static_cast<bool>(d.source));
}

TEST(FrameJets, CircleFrameAndItsDerivative) {
  const CircleCurve curve(kC.x, kC.y, kR);
  const double s0 = 1.2, th = s0 / kR;
  const FrameJets f = frame_jets(curve, s0, 3);
  EXPECT_NEAR(f.normal[0].value(), std::cos(th), 1e-14);
  EXPECT_NEAR(f.normal[1].value(), std::sin(th), 1e-14);
  EXPECT_NEAR(f.tangent[0].value(), -std::sin(th), 1e-14);
  // dn/ds = kappa t
  EXPECT_NEAR(f.normal[0].derivative(1), -std::sin(th) / kR, 1e-13);
  EXPECT_NEAR(f.normal[1].derivative(1), std::cos(th) / kR, 1e-13);
}

TEST(SeriesAlongCurve, FiniteDifferenceSeriesOfRestriction) {
  const CircleCurve curve(kC.x, kC.y, kR);
  const auto ser = series_along_curve(curve, [](const Vec2& x) { return x.x * x.x + x.y; }, 2e-2);
  const double s0 = 0.5;
  const Taylor2 th = Taylor2::variable(s0, 0, 3) * (1.0 / kR);
  const Taylor2 X = kC.x + kR * cos(th), Y = kC.y + kR * sin(th);
  const Taylor2 g = X * X + Y;
  const Series s = ser(s0, 3);
  for (int m = 0; m <= 3; ++m) EXPECT_NEAR(s.derivative(m), g.derivative(m, 0), 2e-5);  // truncation error of the stencil
  EXPECT_EQ(ser(s0, 0).depth(), 0);
}

TEST(StokesJumpTables, RejectsLowPressureDegree) {
  const CircleCurve curve(0, 0, 0.5);
  StokesJumpData d;
  d.beta = [](double, int depth) { return std::array<Series, 2>{Series::constant(0, depth), Series::constant(0, depth)}; };
  EXPECT_THROW(stokes_jump_tables(d, curve, 0.0, 3, 1), DataError);
  EXPECT_THROW(stokes_jump_tables(StokesJumpData{}, curve, 0.0, 1, 1), DataError);
  const StokesJumps z = stokes_jump_tables(d, curve, 0.0, 2, 2);
  EXPECT_EQ(z.pressure(0, 0), 0.0);
  EXPECT_EQ(z.velocity[1](1, 1), 0.0);
}
