#pragma once

#include <functional>
#include <vector>

#include "ifem/core.hpp"
#include "ifem/interface_geometry.hpp"

namespace ifem {

/// Rule on [-1, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Points and weights; reference coordinates for triangle_rule(), physical
/// coordinates for everything built from a concrete element.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double sum(const std::function<double(const Vec2&)>& f) const;
};

/// n-point Gauss-Legendre rule, 1 <= n <= 20.
Rule1D gauss_legendre(int n);

/// Rule on the reference triangle (0,0),(1,0),(0,1) exact for total degree
/// <= d, 0 <= d <= 10.
QuadratureRule triangle_rule(int d);

/// Maps a reference-triangle rule to the physical triangle.
QuadratureRule map_to_triangle(const QuadratureRule& ref, const std::array<Vec2, 3>& tri);

/// Rule for the curved part T^side of a cut element: the straight polygon on
/// that side of the chord (triangle rule of degree `tri_degree`) plus the
/// signed sliver between chord and curve (n x n tensor Gauss). Sliver weights
/// are negative when the sliver is subtracted.
QuadratureRule cut_region_rule(const CutElement& cut, Side side, int n, int tri_degree);

/// Default polygon-part degree for n sliver points.
inline int default_triangle_degree(int n) { return std::min(2 * n - 1, 10); }

double integrate_cut_region(const CutElement& cut, Side side, const std::function<double(const Vec2&)>& f, int n,
                            int tri_degree = -1);

/// Points on Gamma inside T with arc-length weights.
QuadratureRule interface_rule(const CutElement& cut, int n);

double integrate_interface_segment(const CutElement& cut, const std::function<double(const Vec2&)>& g, int n);

/// Straight polygons obtained by clipping T with the chord half-plane; the
/// minus part lies on the -eta side.
std::vector<std::array<Vec2, 3>> chord_polygon_triangles(const CutElement& cut, Side side);

}  // namespace ifem
