#include "ifem/lagrange.hpp"

#include <Eigen/Dense>
#include <memory>
#include <mutex>

namespace ifem {

AffineMap::AffineMap(const std::array<Vec2, 3>& tri)
    : origin_(tri[0]), e1_(tri[1] - tri[0]), e2_(tri[2] - tri[0]), det_(cross(e1_, e2_)) {}

Vec2 AffineMap::to_reference(const Vec2& x) const {
  const Vec2 d = x - origin_;
  return {cross(d, e2_) / det_, cross(e1_, d) / det_};
}

Vec2 AffineMap::gradient_to_physical(const Vec2& g) const {
  // J = [e1 e2]; J^{-T} g
  return {(e2_.y * g.x - e1_.y * g.y) / det_, (-e2_.x * g.x + e1_.x * g.y) / det_};
}

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > 6) throw std::invalid_argument("LagrangeBasis: degree must be in [1, 6]");
  for (int j = 0; j <= degree; ++j) {
    for (int i = 0; i <= degree - j; ++i) nodes_.emplace_back(static_cast<double>(i) / degree, static_cast<double>(j) / degree);
  }
  const int n = size();
  Eigen::MatrixXd V(n, n);
  std::vector<double> m(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    monomials(nodes_[static_cast<std::size_t>(r)], m.data(), nullptr);
    for (int c = 0; c < n; ++c) V(r, c) = m[static_cast<std::size_t>(c)];
  }
  // phi_i = sum_c C(i,c) m_c with V C^T = I
  const Eigen::MatrixXd C = V.inverse().transpose();
  coeffs_.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < n; ++c) coeffs_[static_cast<std::size_t>(i * n + c)] = C(i, c);
  }
}

void LagrangeBasis::monomials(const Vec2& xi, double* m, Vec2* dm) const {
  int idx = 0;
  for (int d = 0; d <= degree_; ++d) {
    for (int b = 0; b <= d; ++b, ++idx) {
      const int a = d - b;
      const double xa = std::pow(xi.x, a), yb = std::pow(xi.y, b);
      m[idx] = xa * yb;
      if (dm) {
        dm[idx].x = a > 0 ? a * std::pow(xi.x, a - 1) * yb : 0.0;
        dm[idx].y = b > 0 ? b * xa * std::pow(xi.y, b - 1) : 0.0;
      }
    }
  }
}

void LagrangeBasis::eval(const Vec2& xi, double* values) const {
  const int n = size();
  double m[28];
  monomials(xi, m, nullptr);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += coeffs_[static_cast<std::size_t>(i * n + c)] * m[c];
    values[i] = s;
  }
}

void LagrangeBasis::eval_gradients(const Vec2& xi, Vec2* grads) const {
  const int n = size();
  double m[28];
  Vec2 dm[28];
  monomials(xi, m, dm);
  for (int i = 0; i < n; ++i) {
    Vec2 g;
    for (int c = 0; c < n; ++c) g += coeffs_[static_cast<std::size_t>(i * n + c)] * dm[c];
    grads[i] = g;
  }
}

const LagrangeBasis& lagrange_basis(int degree) {
  static std::array<std::unique_ptr<LagrangeBasis>, 7> cache;
  static std::once_flag flags[7];
  if (degree < 1 || degree > 6) throw std::invalid_argument("lagrange_basis: degree must be in [1, 6]");
  std::call_once(flags[degree], [degree] { cache[static_cast<std::size_t>(degree)] = std::make_unique<LagrangeBasis>(degree); });
  return *cache[static_cast<std::size_t>(degree)];
}

}  // namespace ifem
