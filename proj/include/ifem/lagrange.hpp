#pragma once

#include <array>
#include <vector>

#include "ifem/core.hpp"

namespace ifem {

/// Affine map from the reference triangle (0,0),(1,0),(0,1) onto a physical
/// triangle.
class AffineMap {
 public:
  explicit AffineMap(const std::array<Vec2, 3>& tri);

  Vec2 to_physical(const Vec2& xi) const { return origin_ + xi.x * e1_ + xi.y * e2_; }
  Vec2 to_reference(const Vec2& x) const;
  /// Reference gradient -> physical gradient (J^{-T} g).
  Vec2 gradient_to_physical(const Vec2& g) const;
  double jacobian() const { return det_; }

 private:
  Vec2 origin_, e1_, e2_;
  double det_;
};

/// Nodal basis of degree p on the reference triangle. Nodes are ordered
/// j = 0..p, i = 0..p-j with xi = (i/p, j/p), matching DofMap.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  /// values[i] = phi_i(xi)
  void eval(const Vec2& xi, double* values) const;
  /// grads[i] = grad_xi phi_i(xi)
  void eval_gradients(const Vec2& xi, Vec2* grads) const;

 private:
  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<double> coeffs_;  // size x size, row i = monomial coefficients of phi_i
  void monomials(const Vec2& xi, double* m, Vec2* dm) const;
};

/// Shared instance per degree (1..6).
const LagrangeBasis& lagrange_basis(int degree);

}  // namespace ifem
