#include "ifem/correction.hpp"

#include <cmath>

#include "ifem/quadrature.hpp"

namespace ifem {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double CorrectionFunction::p(int l, double r, double* dp) const {
  const auto& nodes = rho_[static_cast<std::size_t>(l)];
  const auto& vals = vals_[static_cast<std::size_t>(l)];
  const double rho = r / cut_->chord_length;
  const std::size_t n = nodes.size();
  double value = 0.0, deriv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double li = 1.0, dli = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double denom = nodes[i] - nodes[j];
      dli = dli * (rho - nodes[j]) / denom + li / denom;
      li *= (rho - nodes[j]) / denom;
    }
    value += vals[i] * li;
    deriv += vals[i] * dli;
  }
  if (dp) *dp = deriv / cut_->chord_length;
  return value;
}

void CorrectionFunction::solve_levels(const CorrectionJumps& c) {
  if (static_cast<int>(c.size()) != k_ + 1) throw std::invalid_argument("correction: need k+1 levels of jump data");
  rho_.assign(static_cast<std::size_t>(k_) + 1, {});
  vals_.assign(static_cast<std::size_t>(k_) + 1, {});
  for (int l = 0; l <= k_; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    if (static_cast<int>(c[ul].size()) != l + 1) throw std::invalid_argument("correction: level l needs l+1 values");
    const auto& rs = cut_->gauss_r[ul];
    const auto& ss = cut_->gauss_s[ul];
    for (int i = 0; i <= l; ++i) {
      const double rho = rs[static_cast<std::size_t>(i)] / cut_->chord_length;
      for (double other : rho_[ul]) {
        if (std::abs(other - rho) < 1e-12) throw GeometryError("correction: coincident interpolation abscissae");
      }
      rho_[ul].push_back(rho);
    }
    for (int i = 0; i <= l; ++i) {
      const double r = rs[static_cast<std::size_t>(i)];
      const double s = ss[static_cast<std::size_t>(i)];
      double rhs = -c[ul][static_cast<std::size_t>(i)];
      double sm = 1.0;
      for (int m = 1; m <= l; ++m) {
        sm *= s;
        rhs -= factorial(k_ - l + m) / factorial(m) * sm * p(l - m, r, nullptr);
      }
      vals_[ul].push_back(rhs / factorial(k_ - l));
    }
  }
}

double CorrectionFunction::v(const Vec2& x) const {
  const auto rs = cut_->to_chord(x);
  double sum = 0.0, sj = 1.0;
  for (int j = 0; j <= k_; ++j) {
    sum += sj * p(k_ - j, rs[0], nullptr);
    sj *= rs[1];
  }
  return sum;
}

Vec2 CorrectionFunction::v_gradient(const Vec2& x) const {
  const auto rs = cut_->to_chord(x);
  double dr = 0.0, ds = 0.0, sj = 1.0, sjm1 = 0.0;
  for (int j = 0; j <= k_; ++j) {
    double d = 0.0;
    const double pv = p(k_ - j, rs[0], &d);
    dr += sj * d;
    ds += j * sjm1 * pv;
    sjm1 = sj;
    sj *= rs[1];
  }
  return dr * cut_->tau + ds * cut_->eta;
}

double CorrectionFunction::projection_value(const Vec2& x) const {
  if (projection_ == Projection::CellMean) return mean_;
  const LagrangeBasis& basis = lagrange_basis(k_);
  double phi[28];
  basis.eval(map_->to_reference(x), phi);
  double s = 0.0;
  for (int i = 0; i < basis.size(); ++i) s += nodal_[static_cast<std::size_t>(i)] * phi[i];
  return s;
}

Vec2 CorrectionFunction::projection_gradient(const Vec2& x) const {
  if (projection_ == Projection::CellMean) return {};
  const LagrangeBasis& basis = lagrange_basis(k_);
  Vec2 g[28];
  basis.eval_gradients(map_->to_reference(x), g);
  Vec2 s;
  for (int i = 0; i < basis.size(); ++i) s += nodal_[static_cast<std::size_t>(i)] * g[i];
  return map_->gradient_to_physical(s);
}

double CorrectionFunction::value(const Vec2& x, Side side) const {
  const double pz = projection_value(x);
  return side == Side::Minus ? v(x) - pz : -pz;
}

Vec2 CorrectionFunction::gradient(const Vec2& x, Side side) const {
  const Vec2 pz = projection_gradient(x);
  return side == Side::Minus ? v_gradient(x) - pz : -pz;
}

CorrectionFunction build_correction(const CutElement& cut, const CorrectionJumps& c, int k) {
  if (k < 1 || k > cut.degree) throw std::invalid_argument("build_correction: degree exceeds cut-element data");
  CorrectionFunction w;
  w.cut_ = &cut;
  w.k_ = k;
  w.projection_ = CorrectionFunction::Projection::Interpolant;
  w.map_.emplace(cut.corners);
  w.solve_levels(c);
  const LagrangeBasis& basis = lagrange_basis(k);
  w.nodal_.resize(static_cast<std::size_t>(basis.size()));
  for (int i = 0; i < basis.size(); ++i) {
    const Vec2 x = w.map_->to_physical(basis.nodes()[static_cast<std::size_t>(i)]);
    w.nodal_[static_cast<std::size_t>(i)] = node_side(cut.curve->phi(x)) == Side::Minus ? w.v(x) : 0.0;
  }
  return w;
}

CorrectionFunction build_pressure_correction(const CutElement& cut, const CorrectionJumps& c, int k, int n_quad) {
  if (k < 1 || k > cut.degree) throw std::invalid_argument("build_pressure_correction: degree exceeds cut-element data");
  CorrectionFunction w;
  w.cut_ = &cut;
  w.k_ = k;
  w.projection_ = CorrectionFunction::Projection::CellMean;
  w.map_.emplace(cut.corners);
  w.solve_levels(c);
  const int n = n_quad > 0 ? n_quad : std::max(k + 2, 8);
  const double area = 0.5 * std::abs(w.map_->jacobian());
  w.mean_ = integrate_cut_region(cut, Side::Minus, [&w](const Vec2& x) { return w.v(x); }, n) / area;
  return w;
}

}  // namespace ifem
