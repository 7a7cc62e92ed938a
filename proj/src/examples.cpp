#include "ifem/examples.hpp"

#include <cmath>
#include <numbers>

namespace ifem {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Taylor2 to_taylor(const Series& s, int order) {
  Taylor2 t = Taylor2::zero(order);
  for (int m = 0; m <= std::min(order, s.depth()); ++m) t.coeff(m, 0) = s.coeff(m);
  return t;
}

// X(s + sigma) + nu * n(s + sigma)
std::array<Taylor2, 2> moving_point(const InterfaceCurve& curve, double s, int order) {
  const FrameJets fr = frame_jets(curve, s, order);
  const Taylor2 nu = Taylor2::variable(0.0, 1, order);
  return {to_taylor(fr.position[0], order) + nu * to_taylor(fr.normal[0], order),
          to_taylor(fr.position[1], order) + nu * to_taylor(fr.normal[1], order)};
}

// X(s) + sigma t + nu n with the frame frozen at X(s)
std::array<Taylor2, 2> fixed_point(const InterfaceCurve& curve, double s, int order) {
  const Vec2 x = curve.point_at(s);
  const Vec2 n = curve.normal(x);
  const Vec2 t = rot90(n);
  const Taylor2 sg = Taylor2::variable(0.0, 0, order);
  const Taylor2 nu = Taylor2::variable(0.0, 1, order);
  return {Taylor2(x.x) + sg * t.x + nu * n.x, Taylor2(x.y) + sg * t.y + nu * n.y};
}

// Series in s of D_n^b g along the curve.
template <class F>
Series normal_series(const InterfaceCurve& curve, double s, int b, int depth, F g) {
  const auto P = moving_point(curve, s, depth + b);
  const Taylor2 G = g(P[0], P[1]);
  Series out(depth);
  for (int m = 0; m <= depth; ++m) out.coeff(m) = G.coeff(m, b) * factorial(b);
  return out;
}

template <class F>
Series tangential_series(const InterfaceCurve& curve, double s, int depth, F g) {
  return normal_series(curve, s, 0, depth, g);
}

JumpTable table_from_taylor(const Taylor2& jump, int k) {
  JumpTable t(k);
  for (int l = 0; l <= k; ++l) {
    for (int b = 0; b <= l; ++b) t.jet(l - b, b) = Series::constant(jump.derivative(l - b, b), 0);
  }
  return t;
}

void set_frame(JumpTable& t, const InterfaceCurve& curve, double s) {
  t.arc = s;
  t.point = curve.point_at(s);
  t.normal = curve.normal(t.point);
  t.tangent = rot90(t.normal);
  t.curvature = curve.curvature(t.point);
}

// ---------------------------------------------------------------------------
// Example definitions. Functions are templates so that the same formula is
// evaluated in double and in truncated Taylor arithmetic.

struct P1Def {
  static constexpr const char* kName = "p1";
  static constexpr const char* kDescription = "u = (2/3+x)^3 for x < 1/3, (4/3-x)^3 otherwise; line x = 1/3";
  static std::unique_ptr<InterfaceCurve> make_curve() { return std::make_unique<LineCurve>(1.0, 0.0, 1.0 / 3.0); }
  template <class T>
  static T u(const T& x, const T&, Side side) {
    const T a = side == Side::Minus ? T(2.0 / 3.0) + x : T(4.0 / 3.0) - x;
    return a * a * a;
  }
  template <class T>
  static T f(const T& x, const T&, Side side) {
    return side == Side::Minus ? T(-6.0) * (T(2.0 / 3.0) + x) : T(-6.0) * (T(4.0 / 3.0) - x);
  }
  template <class T>
  static T beta(const T&, const T&) {
    return T(6.0);
  }
};

struct P2Def {
  static constexpr const char* kName = "p2";
  static constexpr const char* kDescription = "u = 1 for r <= 1/3, 1 - log(3r) otherwise; circle r = 1/3";
  static std::unique_ptr<InterfaceCurve> make_curve() { return std::make_unique<CircleCurve>(0.0, 0.0, 1.0 / 3.0); }
  template <class T>
  static T u(const T& x, const T& y, Side side) {
    using std::log;
    using std::sqrt;
    if (side == Side::Minus) return T(1.0);
    return T(1.0) - log(T(3.0) * sqrt(x * x + y * y));
  }
  template <class T>
  static T f(const T&, const T&, Side) {
    return T(0.0);
  }
  template <class T>
  static T beta(const T&, const T&) {
    return T(3.0);
  }
};

struct PQuadDef {
  static constexpr const char* kName = "pquad";
  static constexpr const char* kDescription = "u = (2/3+x)^2 for x < 1/3, (4/3-x)^2 otherwise; line x = 1/3";
  static std::unique_ptr<InterfaceCurve> make_curve() { return std::make_unique<LineCurve>(1.0, 0.0, 1.0 / 3.0); }
  template <class T>
  static T u(const T& x, const T&, Side side) {
    const T a = side == Side::Minus ? T(2.0 / 3.0) + x : T(4.0 / 3.0) - x;
    return a * a;
  }
  template <class T>
  static T f(const T&, const T&, Side) {
    return T(-2.0);
  }
  template <class T>
  static T beta(const T&, const T&) {
    return T(4.0);
  }
};

struct S1Def {
  static constexpr const char* kName = "s1";
  static constexpr const char* kDescription =
      "u = (0, 2/3+x | 4/3-x), p = x^2+y^2+1/3 | x^2+y^2-8/3; line x = 1/3";
  static std::unique_ptr<InterfaceCurve> make_curve() { return std::make_unique<LineCurve>(1.0, 0.0, 1.0 / 3.0); }
  template <class T>
  static std::array<T, 2> u(const T& x, const T&, Side side) {
    return {T(0.0), side == Side::Minus ? T(2.0 / 3.0) + x : T(4.0 / 3.0) - x};
  }
  template <class T>
  static T p(const T& x, const T& y, Side side) {
    return x * x + y * y + (side == Side::Minus ? T(1.0 / 3.0) : T(-8.0 / 3.0));
  }
  template <class T>
  static std::array<T, 2> f(const T& x, const T& y, Side) {
    return {T(2.0) * x, T(2.0) * y};
  }
  template <class T>
  static T div_f(const T&, const T&, Side) {
    return T(4.0);
  }
  template <class T>
  static std::array<T, 2> beta(const T&, const T&) {
    return {T(-3.0), T(2.0)};
  }
};

struct S2Def {
  static constexpr const char* kName = "s2";
  static constexpr const char* kDescription =
      "rotational flow: u = 3(y,-x) for r <= 1/3, (4/(3r)-1)(y,-x) otherwise; p = 4-pi/9 | -pi/9; circle r = 1/3";
  static std::unique_ptr<InterfaceCurve> make_curve() { return std::make_unique<CircleCurve>(0.0, 0.0, 1.0 / 3.0); }
  template <class T>
  static std::array<T, 2> u(const T& x, const T& y, Side side) {
    using std::sqrt;
    if (side == Side::Minus) return {T(3.0) * y, T(-3.0) * x};
    const T g = T(4.0 / 3.0) / sqrt(x * x + y * y) - T(1.0);
    return {g * y, T(0.0) - g * x};
  }
  template <class T>
  static T p(const T&, const T&, Side side) {
    constexpr double c = std::numbers::pi / 9.0;
    return side == Side::Minus ? T(4.0 - c) : T(-c);
  }
  template <class T>
  static std::array<T, 2> f(const T& x, const T& y, Side side) {
    using std::sqrt;
    if (side == Side::Minus) return {T(0.0), T(0.0)};
    const T r = sqrt(x * x + y * y);
    const T c = T(4.0 / 3.0) / (r * r * r);
    return {c * y, T(0.0) - c * x};
  }
  template <class T>
  static T div_f(const T&, const T&, Side) {
    return T(0.0);
  }
  template <class T>
  static std::array<T, 2> beta(const T& x, const T& y) {
    using std::sqrt;
    const T r = sqrt(x * x + y * y);
    return {(T(4.0) * y - T(4.0) * x) / r, (T(-4.0) * x - T(4.0) * y) / r};
  }
};

// ---------------------------------------------------------------------------

template <class D>
class PoissonImpl final : public PoissonExample {
 public:
  PoissonImpl() : curve_(D::make_curve()) {}
  std::string name() const override { return D::kName; }
  std::string description() const override { return D::kDescription; }
  const InterfaceCurve& curve() const override { return *curve_; }
  double u(const Vec2& x, Side side) const override { return D::template u<double>(x.x, x.y, side); }
  Vec2 grad_u(const Vec2& x, Side side) const override {
    const Taylor2 U = D::u(Taylor2::variable(x.x, 0, 1), Taylor2::variable(x.y, 1, 1), side);
    return {U.coeff(1, 0), U.coeff(0, 1)};
  }
  double f(const Vec2& x, Side side) const override { return D::template f<double>(x.x, x.y, side); }
  double beta(const Vec2& x) const override { return D::template beta<double>(x.x, x.y); }

  ScalarJumpData jump_data() const override {
    const InterfaceCurve* c = curve_.get();
    auto beta_series = [c](double s, int depth) {
      return tangential_series(*c, s, depth, [](const Taylor2& x, const Taylor2& y) { return D::beta(x, y); });
    };
    auto source = [c](double s, int b, int depth) {
      return normal_series(*c, s, b, depth, [](const Taylor2& x, const Taylor2& y) {
        return D::f(x, y, Side::Plus) - D::f(x, y, Side::Minus);
      });
    };
    return poisson_jump_data(beta_series, source);
  }

  JumpTable exact_jumps(double s, int k) const override {
    const auto P = fixed_point(*curve_, s, k);
    JumpTable t = table_from_taylor(D::u(P[0], P[1], Side::Plus) - D::u(P[0], P[1], Side::Minus), k);
    set_frame(t, *curve_, s);
    return t;
  }

  double minus_laplacian(const Vec2& x, Side side) const override {
    const Taylor2 U = D::u(Taylor2::variable(x.x, 0, 2), Taylor2::variable(x.y, 1, 2), side);
    return -(U.derivative(2, 0) + U.derivative(0, 2));
  }

 private:
  std::unique_ptr<InterfaceCurve> curve_;
};

template <class D>
class StokesImpl final : public StokesExample {
 public:
  StokesImpl() : curve_(D::make_curve()) {}
  std::string name() const override { return D::kName; }
  std::string description() const override { return D::kDescription; }
  const InterfaceCurve& curve() const override { return *curve_; }
  Vec2 u(const Vec2& x, Side side) const override {
    const auto v = D::template u<double>(x.x, x.y, side);
    return {v[0], v[1]};
  }
  std::array<Vec2, 2> grad_u(const Vec2& x, Side side) const override {
    const auto U = D::u(Taylor2::variable(x.x, 0, 1), Taylor2::variable(x.y, 1, 1), side);
    return {Vec2{U[0].coeff(1, 0), U[0].coeff(0, 1)}, Vec2{U[1].coeff(1, 0), U[1].coeff(0, 1)}};
  }
  double p(const Vec2& x, Side side) const override { return D::template p<double>(x.x, x.y, side); }
  Vec2 f(const Vec2& x, Side side) const override {
    const auto v = D::template f<double>(x.x, x.y, side);
    return {v[0], v[1]};
  }
  double div_f(const Vec2& x, Side side) const override { return D::template div_f<double>(x.x, x.y, side); }
  Vec2 beta(const Vec2& x) const override {
    const auto v = D::template beta<double>(x.x, x.y);
    return {v[0], v[1]};
  }

  StokesJumpData jump_data() const override {
    const InterfaceCurve* c = curve_.get();
    StokesJumpData d;
    d.beta = [c](double s, int depth) {
      std::array<Series, 2> out;
      for (int i = 0; i < 2; ++i)
        out[static_cast<std::size_t>(i)] = tangential_series(
            *c, s, depth, [i](const Taylor2& x, const Taylor2& y) { return D::beta(x, y)[static_cast<std::size_t>(i)]; });
      return out;
    };
    d.force_jump = [c](double s, int b, int depth) {
      std::array<Series, 2> out;
      for (int i = 0; i < 2; ++i)
        out[static_cast<std::size_t>(i)] = normal_series(*c, s, b, depth, [i](const Taylor2& x, const Taylor2& y) {
          return D::f(x, y, Side::Plus)[static_cast<std::size_t>(i)] - D::f(x, y, Side::Minus)[static_cast<std::size_t>(i)];
        });
      return out;
    };
    d.div_force_jump = [c](double s, int b, int depth) {
      return normal_series(*c, s, b, depth, [](const Taylor2& x, const Taylor2& y) {
        return D::div_f(x, y, Side::Plus) - D::div_f(x, y, Side::Minus);
      });
    };
    return d;
  }

  StokesJumps exact_jumps(double s, int k, int k_pressure) const override {
    StokesJumps out;
    const auto Pv = fixed_point(*curve_, s, k);
    const auto up = D::u(Pv[0], Pv[1], Side::Plus);
    const auto um = D::u(Pv[0], Pv[1], Side::Minus);
    out.velocity[0] = table_from_taylor(up[0] - um[0], k);
    out.velocity[1] = table_from_taylor(up[1] - um[1], k);
    const auto Pp = fixed_point(*curve_, s, k_pressure);
    out.pressure = table_from_taylor(D::p(Pp[0], Pp[1], Side::Plus) - D::p(Pp[0], Pp[1], Side::Minus), k_pressure);
    for (JumpTable* t : {&out.velocity[0], &out.velocity[1], &out.pressure}) set_frame(*t, *curve_, s);
    return out;
  }

  std::array<double, 4> residuals(const Vec2& x, Side side) const override {
    const Taylor2 X = Taylor2::variable(x.x, 0, 2), Y = Taylor2::variable(x.y, 1, 2);
    const auto U = D::u(X, Y, side);
    const Taylor2 P = D::p(X, Y, side);
    const auto F = D::f(X, Y, side);
    const double fx = F[0].value(), fy = F[1].value();
    const double r0 = -(U[0].derivative(2, 0) + U[0].derivative(0, 2)) + P.derivative(1, 0) - fx;
    const double r1 = -(U[1].derivative(2, 0) + U[1].derivative(0, 2)) + P.derivative(0, 1) - fy;
    const double divu = U[0].derivative(1, 0) + U[1].derivative(0, 1);
    const double divf = F[0].derivative(1, 0) + F[1].derivative(0, 1) - D::template div_f<double>(x.x, x.y, side);
    return {r0, r1, divu, divf};
  }

 private:
  std::unique_ptr<InterfaceCurve> curve_;
};

std::vector<double> sample_arcs(const InterfaceCurve& curve, int samples) {
  std::vector<double> s;
  const auto len = curve.arc_length();
  for (int j = 0; j < samples; ++j) {
    const double frac = (j + 0.5) / samples;
    s.push_back(len ? *len * frac : -0.9 + 1.8 * frac);
  }
  return s;
}

double table_mismatch(const JumpTable& a, const JumpTable& b) {
  const int k = std::min(a.degree(), b.degree());
  double scale = 1.0;
  for (int l = 0; l <= k; ++l)
    for (int j = 0; j <= l; ++j) scale = std::max(scale, std::abs(b(l - j, j)));
  double worst = 0.0;
  for (int l = 0; l <= k; ++l)
    for (int j = 0; j <= l; ++j) worst = std::max(worst, std::abs(a(l - j, j) - b(l - j, j)) / scale);
  return worst;
}

}  // namespace

std::unique_ptr<PoissonExample> make_poisson_example(const std::string& name) {
  if (name == "p1") return std::make_unique<PoissonImpl<P1Def>>();
  if (name == "p2") return std::make_unique<PoissonImpl<P2Def>>();
  if (name == "pquad") return std::make_unique<PoissonImpl<PQuadDef>>();
  throw DataError("unknown Poisson example '" + name + "'");
}

std::unique_ptr<StokesExample> make_stokes_example(const std::string& name) {
  if (name == "s1") return std::make_unique<StokesImpl<S1Def>>();
  if (name == "s2") return std::make_unique<StokesImpl<S2Def>>();
  throw DataError("unknown Stokes example '" + name + "'");
}

double validate_example(const PoissonExample& ex, int k, int samples) {
  const InterfaceCurve& c = ex.curve();
  const ScalarJumpData data = ex.jump_data();
  double worst = 0.0;
  for (double s : sample_arcs(c, samples)) {
    const JumpTable built = build_jump_table(data, c, s, k);
    const JumpTable exact = ex.exact_jumps(s, k);
    worst = std::max(worst, table_mismatch(built, exact));
    const Vec2 x = c.point_at(s);
    const Vec2 n = c.normal(x);
    worst = std::max(worst, std::abs(ex.beta(x) + exact(0, 1)) / std::max(1.0, std::abs(ex.beta(x))));
    for (Side side : {Side::Minus, Side::Plus}) {
      const Vec2 y = x + (side == Side::Minus ? -0.05 : 0.05) * n;
      const double f = ex.f(y, side);
      worst = std::max(worst, std::abs(f - ex.minus_laplacian(y, side)) / std::max(1.0, std::abs(f)));
    }
  }
  return worst;
}

double validate_example(const StokesExample& ex, int k, int samples) {
  const InterfaceCurve& c = ex.curve();
  const StokesJumpData data = ex.jump_data();
  double worst = 0.0;
  for (double s : sample_arcs(c, samples)) {
    const StokesJumps built = stokes_jump_tables(data, c, s, k, k);
    const StokesJumps exact = ex.exact_jumps(s, k, k);
    for (int i = 0; i < 2; ++i)
      worst = std::max(worst, table_mismatch(built.velocity[static_cast<std::size_t>(i)], exact.velocity[static_cast<std::size_t>(i)]));
    worst = std::max(worst, table_mismatch(built.pressure, exact.pressure));
    const Vec2 x = c.point_at(s);
    const Vec2 n = c.normal(x);
    // beta = -[D_n u] + [p] n
    const Vec2 expected = Vec2{-exact.velocity[0](0, 1), -exact.velocity[1](0, 1)} + exact.pressure(0, 0) * n;
    worst = std::max(worst, norm(ex.beta(x) - expected) / std::max(1.0, norm(expected)));
    for (Side side : {Side::Minus, Side::Plus}) {
      const Vec2 y = x + (side == Side::Minus ? -0.05 : 0.05) * n;
      const auto r = ex.residuals(y, side);
      const double scale = std::max(1.0, norm(ex.f(y, side)));
      for (double v : r) worst = std::max(worst, std::abs(v) / scale);
    }
  }
  return worst;
}

ExampleCatalog register_builtin_examples() {
  ExampleCatalog cat;
  for (const char* name : {"p1", "p2", "pquad"}) {
    const auto ex = make_poisson_example(name);
    const double m = validate_example(*ex, 4, 20);
    if (!(m <= 1e-8)) throw DataError(std::string("example ") + name + ": data disagrees with the exact solution (" + std::to_string(m) + ")");
    cat.poisson.emplace_back(name);
  }
  for (const char* name : {"s1", "s2"}) {
    const auto ex = make_stokes_example(name);
    const double m = validate_example(*ex, 3, 20);
    if (!(m <= 1e-8)) throw DataError(std::string("example ") + name + ": data disagrees with the exact solution (" + std::to_string(m) + ")");
    cat.stokes.emplace_back(name);
  }
  return cat;
}

}  // namespace ifem
