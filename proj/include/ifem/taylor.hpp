#pragma once

// Truncated Taylor arithmetic.
//
// Taylor2 is a bivariate truncated power series in two seed variables
// (sigma, nu); it is used to push analytic formulas through exact
// differentiation. Series is a univariate truncated series in arc length used
// by the jump recurrence.

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

namespace ifem {

class Taylor2 {
 public:
  static constexpr int kMaxOrder = 8;
  static constexpr int kMaxSize = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

  Taylor2() = default;
  /// Exact constant, compatible with series of any order.
  Taylor2(double value);  // NOLINT(google-explicit-constructor)

  /// Seed variable: value + d/dsigma (which == 0) or d/dnu (which == 1).
  static Taylor2 variable(double value, int which, int order);
  /// Zero series truncated at `order`.
  static Taylor2 zero(int order);

  int order() const { return order_; }
  double value() const { return c_[0]; }
  /// Coefficient of sigma^a nu^b.
  double coeff(int a, int b) const;
  double& coeff(int a, int b);
  /// Mixed partial derivative d^{a+b} / dsigma^a dnu^b at the expansion point.
  double derivative(int a, int b) const;

  Taylor2& operator+=(const Taylor2& o);
  Taylor2& operator-=(const Taylor2& o);
  Taylor2& operator*=(const Taylor2& o);
  Taylor2& operator/=(const Taylor2& o);

  friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
  friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
  friend Taylor2 operator*(Taylor2 a, const Taylor2& b) { return a *= b; }
  friend Taylor2 operator/(Taylor2 a, const Taylor2& b) { return a /= b; }
  Taylor2 operator-() const;

  /// f(this) given f and its derivatives at value(): derivs[m] = f^{(m)}(value()).
  Taylor2 compose(const std::vector<double>& derivs) const;

  static int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

 private:
  int order_ = kMaxOrder;
  std::array<double, kMaxSize> c_{};
};

Taylor2 sqrt(const Taylor2& x);
Taylor2 log(const Taylor2& x);
Taylor2 exp(const Taylor2& x);
Taylor2 sin(const Taylor2& x);
Taylor2 cos(const Taylor2& x);
Taylor2 pow(const Taylor2& x, double p);

/// Univariate truncated Taylor series about an expansion point; coefficient m
/// multiplies (s - s0)^m. depth() is the highest retained power.
class Series {
 public:
  Series() = default;
  explicit Series(int depth) : c_(static_cast<std::size_t>(std::max(depth, 0)) + 1, 0.0) {}
  static Series constant(double v, int depth);
  /// Builds a series from derivative values d[m] = f^{(m)}(s0).
  static Series from_derivatives(const std::vector<double>& d);
  /// Pure-sigma part of a Taylor2 truncated at `depth`.
  static Series from_taylor(const Taylor2& t, int depth);

  int depth() const { return static_cast<int>(c_.size()) - 1; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  double coeff(int m) const { return m <= depth() ? c_[static_cast<std::size_t>(m)] : 0.0; }
  double& coeff(int m) { return c_.at(static_cast<std::size_t>(m)); }
  /// m-th derivative at the expansion point.
  double derivative(int m) const;

  Series truncated(int depth) const;
  /// d/ds, one level shallower.
  Series derivative_series() const;

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(double s);
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, double s) { return a *= s; }
  friend Series operator*(double s, Series a) { return a *= s; }
  friend Series operator*(const Series& a, const Series& b);
  Series operator-() const { return *this * -1.0; }

 private:
  std::vector<double> c_;
};

/// Derivatives of f at s0 up to `depth` by central differences on a symmetric
/// stencil fitted with a polynomial of degree 2*(depth/2 + 2).
Series series_by_central_differences(const std::function<double(double)>& f, double s0, int depth,
                                     double step);

}  // namespace ifem
