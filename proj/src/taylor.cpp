#include "ifem/taylor.hpp"

#include <cmath>
#include <stdexcept>

namespace ifem {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Taylor2::Taylor2(double value) : order_(kMaxOrder) { c_[0] = value; }

Taylor2 Taylor2::variable(double value, int which, int order) {
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("Taylor2 order out of range");
  Taylor2 t;
  t.order_ = order;
  t.c_[0] = value;
  if (order >= 1) t.c_[static_cast<std::size_t>(which == 0 ? index(1, 0) : index(0, 1))] = 1.0;
  return t;
}

Taylor2 Taylor2::zero(int order) {
  Taylor2 t;
  t.order_ = order;
  return t;
}

double Taylor2::coeff(int a, int b) const {
  if (a < 0 || b < 0 || a + b > order_) return 0.0;
  return c_[static_cast<std::size_t>(index(a, b))];
}

double& Taylor2::coeff(int a, int b) { return c_.at(static_cast<std::size_t>(index(a, b))); }

double Taylor2::derivative(int a, int b) const { return coeff(a, b) * factorial(a) * factorial(b); }

Taylor2& Taylor2::operator+=(const Taylor2& o) {
  order_ = std::min(order_, o.order_);
  const int n = (order_ + 1) * (order_ + 2) / 2;
  for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
  return *this;
}

Taylor2& Taylor2::operator-=(const Taylor2& o) {
  order_ = std::min(order_, o.order_);
  const int n = (order_ + 1) * (order_ + 2) / 2;
  for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
  return *this;
}

Taylor2& Taylor2::operator*=(const Taylor2& o) {
  const int order = std::min(order_, o.order_);
  std::array<double, kMaxSize> r{};
  for (int d = 0; d <= order; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      double sum = 0.0;
      for (int a1 = 0; a1 <= a; ++a1) {
        for (int b1 = 0; b1 <= b; ++b1) {
          sum += c_[static_cast<std::size_t>(index(a1, b1))] *
                 o.c_[static_cast<std::size_t>(index(a - a1, b - b1))];
        }
      }
      r[static_cast<std::size_t>(index(a, b))] = sum;
    }
  }
  c_ = r;
  order_ = order;
  return *this;
}

Taylor2& Taylor2::operator/=(const Taylor2& o) {
  const double y0 = o.value();
  std::vector<double> d(static_cast<std::size_t>(o.order_) + 1);
  // derivatives of 1/y: (-1)^m m! / y^{m+1}
  double p = 1.0 / y0;
  for (int m = 0; m <= o.order_; ++m) {
    d[static_cast<std::size_t>(m)] = p * ((m % 2) ? -1.0 : 1.0) * factorial(m);
    p /= y0;
  }
  return *this *= o.compose(d);
}

Taylor2 Taylor2::operator-() const {
  Taylor2 r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Taylor2 Taylor2::compose(const std::vector<double>& derivs) const {
  // f(x0 + h) = sum_m f^{(m)}(x0)/m! h^m, h nilpotent beyond order_.
  Taylor2 h = *this;
  h.c_[0] = 0.0;
  Taylor2 result = zero(order_);
  result.c_[0] = derivs.empty() ? 0.0 : derivs[0];
  Taylor2 hp = Taylor2(1.0);
  hp.order_ = order_;
  const int mmax = std::min<int>(order_, static_cast<int>(derivs.size()) - 1);
  for (int m = 1; m <= mmax; ++m) {
    hp *= h;
    const double coef = derivs[static_cast<std::size_t>(m)] / factorial(m);
    Taylor2 term = hp;
    for (auto& v : term.c_) v *= coef;
    result += term;
  }
  return result;
}

Taylor2 sqrt(const Taylor2& x) { return pow(x, 0.5); }

Taylor2 pow(const Taylor2& x, double p) {
  const double x0 = x.value();
  std::vector<double> d(static_cast<std::size_t>(x.order()) + 1);
  double coef = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    d[static_cast<std::size_t>(m)] = coef * std::pow(x0, p - m);
    coef *= (p - m);
  }
  return x.compose(d);
}

Taylor2 log(const Taylor2& x) {
  const double x0 = x.value();
  std::vector<double> d(static_cast<std::size_t>(x.order()) + 1);
  d[0] = std::log(x0);
  for (int m = 1; m <= x.order(); ++m) {
    d[static_cast<std::size_t>(m)] =
        ((m % 2) ? 1.0 : -1.0) * factorial(m - 1) / std::pow(x0, m);
  }
  return x.compose(d);
}

Taylor2 exp(const Taylor2& x) {
  std::vector<double> d(static_cast<std::size_t>(x.order()) + 1, std::exp(x.value()));
  return x.compose(d);
}

Taylor2 sin(const Taylor2& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  std::vector<double> d(static_cast<std::size_t>(x.order()) + 1);
  const double cyc[4] = {s, c, -s, -c};
  for (int m = 0; m <= x.order(); ++m) d[static_cast<std::size_t>(m)] = cyc[m % 4];
  return x.compose(d);
}

Taylor2 cos(const Taylor2& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  std::vector<double> d(static_cast<std::size_t>(x.order()) + 1);
  const double cyc[4] = {c, -s, -c, s};
  for (int m = 0; m <= x.order(); ++m) d[static_cast<std::size_t>(m)] = cyc[m % 4];
  return x.compose(d);
}

// ---------------------------------------------------------------------------

Series Series::constant(double v, int depth) {
  Series s(depth);
  s.c_[0] = v;
  return s;
}

Series Series::from_derivatives(const std::vector<double>& d) {
  Series s(static_cast<int>(d.size()) - 1);
  for (std::size_t m = 0; m < d.size(); ++m) s.c_[m] = d[m] / factorial(static_cast<int>(m));
  return s;
}

Series Series::from_taylor(const Taylor2& t, int depth) {
  if (depth > t.order()) throw std::invalid_argument("Series::from_taylor: depth exceeds order");
  Series s(depth);
  for (int m = 0; m <= depth; ++m) s.c_[static_cast<std::size_t>(m)] = t.coeff(m, 0);
  return s;
}

double Series::derivative(int m) const { return coeff(m) * factorial(m); }

Series Series::truncated(int depth) const {
  if (depth > this->depth()) throw std::invalid_argument("Series::truncated: not enough depth");
  Series s(depth);
  std::copy_n(c_.begin(), depth + 1, s.c_.begin());
  return s;
}

Series Series::derivative_series() const {
  if (depth() < 1) throw std::invalid_argument("Series::derivative_series: depth exhausted");
  Series s(depth() - 1);
  for (int m = 0; m < depth(); ++m) s.c_[static_cast<std::size_t>(m)] = (m + 1) * c_[static_cast<std::size_t>(m) + 1];
  return s;
}

Series& Series::operator+=(const Series& o) {
  const int d = std::min(depth(), o.depth());
  c_.resize(static_cast<std::size_t>(d) + 1);
  for (int m = 0; m <= d; ++m) c_[static_cast<std::size_t>(m)] += o.c_[static_cast<std::size_t>(m)];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  const int d = std::min(depth(), o.depth());
  c_.resize(static_cast<std::size_t>(d) + 1);
  for (int m = 0; m <= d; ++m) c_[static_cast<std::size_t>(m)] -= o.c_[static_cast<std::size_t>(m)];
  return *this;
}

Series& Series::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Series operator*(const Series& a, const Series& b) {
  const int d = std::min(a.depth(), b.depth());
  Series r(d);
  for (int m = 0; m <= d; ++m) {
    double sum = 0.0;
    for (int j = 0; j <= m; ++j) sum += a.coeff(j) * b.coeff(m - j);
    r.coeff(m) = sum;
  }
  return r;
}

Series series_by_central_differences(const std::function<double(double)>& f, double s0, int depth,
                                     double step) {
  const int q = depth / 2 + 2;
  const int npts = 2 * q + 1;
  // Fit the interpolating polynomial in scaled variable t = (s - s0)/step.
  std::vector<double> vand(static_cast<std::size_t>(npts * npts));
  std::vector<double> rhs(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    const double t = i - q;
    double p = 1.0;
    for (int j = 0; j < npts; ++j) {
      vand[static_cast<std::size_t>(i * npts + j)] = p;
      p *= t;
    }
    rhs[static_cast<std::size_t>(i)] = f(s0 + t * step);
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < npts; ++col) {
    int piv = col;
    for (int r = col + 1; r < npts; ++r) {
      if (std::abs(vand[static_cast<std::size_t>(r * npts + col)]) >
          std::abs(vand[static_cast<std::size_t>(piv * npts + col)]))
        piv = r;
    }
    if (piv != col) {
      for (int j = 0; j < npts; ++j)
        std::swap(vand[static_cast<std::size_t>(col * npts + j)], vand[static_cast<std::size_t>(piv * npts + j)]);
      std::swap(rhs[static_cast<std::size_t>(col)], rhs[static_cast<std::size_t>(piv)]);
    }
    for (int r = col + 1; r < npts; ++r) {
      const double m = vand[static_cast<std::size_t>(r * npts + col)] / vand[static_cast<std::size_t>(col * npts + col)];
      for (int j = col; j < npts; ++j)
        vand[static_cast<std::size_t>(r * npts + j)] -= m * vand[static_cast<std::size_t>(col * npts + j)];
      rhs[static_cast<std::size_t>(r)] -= m * rhs[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> coef(static_cast<std::size_t>(npts));
  for (int r = npts - 1; r >= 0; --r) {
    double sum = rhs[static_cast<std::size_t>(r)];
    for (int j = r + 1; j < npts; ++j) sum -= vand[static_cast<std::size_t>(r * npts + j)] * coef[static_cast<std::size_t>(j)];
    coef[static_cast<std::size_t>(r)] = sum / vand[static_cast<std::size_t>(r * npts + r)];
  }
  Series s(depth);
  double scale = 1.0;
  for (int m = 0; m <= depth; ++m) {
    s.coeff(m) = coef[static_cast<std::size_t>(m)] / scale;
    scale *= step;
  }
  return s;
}

}  // namespace ifem
