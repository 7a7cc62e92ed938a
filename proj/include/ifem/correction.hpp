#pragma once

#include <optional>
#include <vector>

#include "ifem/core.hpp"
#include "ifem/interface_geometry.hpp"
#include "ifem/lagrange.hpp"

namespace ifem {

/// c[l][i] = [D_eta^{k-l} u] at the i-th projected Gauss point of level l,
/// l = 0..k, i = 0..l, in the difference convention.
using CorrectionJumps = std::vector<std::vector<double>>;

/// Element-local piecewise polynomial carrying prescribed interface jumps.
///
/// On the minus side the function is v - P z, on the plus side -P z, where
/// v(s, r) = sum_j s^j p_{k-j}(r) in chord coordinates, z = v on the minus
/// part and 0 on the plus part, and P is either the Lagrange interpolant
/// (Poisson and velocity) or the cell mean (P0 pressure).
class CorrectionFunction {
 public:
  enum class Projection { Interpolant, CellMean };

  CorrectionFunction() = default;

  int degree() const { return k_; }
  Projection projection() const { return projection_; }
  const CutElement& cut() const { return *cut_; }

  double value(const Vec2& x, Side side) const;
  Vec2 gradient(const Vec2& x, Side side) const;

  /// The jump-carrying polynomial v and its physical gradient.
  double v(const Vec2& x) const;
  Vec2 v_gradient(const Vec2& x) const;
  /// Value of P z at x.
  double projection_value(const Vec2& x) const;
  Vec2 projection_gradient(const Vec2& x) const;

  /// Coefficients of I_h z in the degree-k element basis (Interpolant kind).
  const std::vector<double>& nodal_values() const { return nodal_; }
  double cell_mean() const { return mean_; }

  friend CorrectionFunction build_correction(const CutElement&, const CorrectionJumps&, int);
  friend CorrectionFunction build_pressure_correction(const CutElement&, const CorrectionJumps&, int, int);

 private:
  const CutElement* cut_ = nullptr;
  int k_ = 0;
  Projection projection_ = Projection::Interpolant;
  // p_l in Lagrange form over scaled abscissae rho = r / r_T
  std::vector<std::vector<double>> rho_;
  std::vector<std::vector<double>> vals_;
  std::vector<double> nodal_;
  double mean_ = 0.0;
  std::optional<AffineMap> map_;

  double p(int l, double r, double* dp) const;
  void solve_levels(const CorrectionJumps& c);
};

/// Poisson / velocity variant: vanishes at all Lagrange points of T.
CorrectionFunction build_correction(const CutElement& cut, const CorrectionJumps& c, int k);

/// Pressure variant with zero cell mean. `n_quad` Gauss points per direction
/// for the mean.
CorrectionFunction build_pressure_correction(const CutElement& cut, const CorrectionJumps& c, int k, int n_quad = -1);

/// Side of a point inside a cut element, from the level set.
inline Side side_of(const CutElement& cut, const Vec2& x) {
  return cut.curve->phi(x) <= 0.0 ? Side::Minus : Side::Plus;
}

}  // namespace ifem
