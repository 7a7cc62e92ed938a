#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ifem/core.hpp"
#include "ifem/mesh.hpp"
#include "ifem/taylor.hpp"

namespace ifem {

/// Smooth interface given implicitly by a level set phi (phi < 0 on the minus
/// side) together with an arc-length parametrization X(s) oriented along the
/// tangent t = rot90(n). Implementations must be reentrant.
class InterfaceCurve {
 public:
  virtual ~InterfaceCurve() = default;

  virtual double phi(const Vec2& x) const = 0;
  virtual Vec2 grad(const Vec2& x) const = 0;
  virtual Sym2 hessian(const Vec2& x) const = 0;

  /// Unit normal pointing from the minus side into the plus side.
  Vec2 normal(const Vec2& x) const;
  Vec2 tangent(const Vec2& x) const { return rot90(normal(x)); }
  /// Signed curvature from the level-set derivatives; positive for a circle
  /// enclosing the minus side.
  virtual double curvature(const Vec2& x) const;

  /// Arc-length coordinate of a point on the curve.
  virtual double arc_coordinate(const Vec2& x) const = 0;
  virtual Vec2 point_at(double s) const = 0;
  /// Total length for closed curves; empty for unbounded curves.
  virtual std::optional<double> arc_length() const { return std::nullopt; }

  /// Taylor expansion of X(s0 + sigma) truncated at `order`. The default uses
  /// central differences of point_at().
  virtual std::array<Taylor2, 2> position_jet(double s0, int order) const;
  /// Taylor expansion of the curvature along the curve.
  virtual Series curvature_jet(double s0, int depth) const;

  virtual std::string describe() const = 0;
};

/// a x + b y = c, minus side where a x + b y < c.
class LineCurve final : public InterfaceCurve {
 public:
  LineCurve(double a, double b, double c);
  double phi(const Vec2& x) const override;
  Vec2 grad(const Vec2& x) const override;
  Sym2 hessian(const Vec2& x) const override;
  double curvature(const Vec2&) const override { return 0.0; }
  double arc_coordinate(const Vec2& x) const override;
  Vec2 point_at(double s) const override;
  std::array<Taylor2, 2> position_jet(double s0, int order) const override;
  Series curvature_jet(double s0, int depth) const override;
  std::string describe() const override;

 private:
  Vec2 n_;       // unit normal
  double c_;     // offset along n_
  Vec2 origin_;  // closest point to (0,0)
};

/// Circle of radius R, minus side inside.
class CircleCurve final : public InterfaceCurve {
 public:
  CircleCurve(double cx, double cy, double radius);
  double phi(const Vec2& x) const override;
  Vec2 grad(const Vec2& x) const override;
  Sym2 hessian(const Vec2& x) const override;
  double curvature(const Vec2&) const override { return 1.0 / radius_; }
  double arc_coordinate(const Vec2& x) const override;
  Vec2 point_at(double s) const override;
  std::optional<double> arc_length() const override;
  std::array<Taylor2, 2> position_jet(double s0, int order) const override;
  Series curvature_jet(double s0, int depth) const override;
  std::string describe() const override;

  Vec2 center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec2 center_;
  double radius_;
};

/// Parses the built-in catalog names `line{a,b,c}` and `circle{cx,cy,R}`.
std::unique_ptr<InterfaceCurve> make_curve(const std::string& spec);

enum class ElementClass { Minus, Plus, Cut };

/// Intersection of the curve with a triangle boundary. `vertex` is the local
/// vertex index when the point coincides with a vertex, otherwise -1; `edge`
/// is the local edge (e connects vertices e and e+1) or -1 for vertex hits.
struct EdgeHit {
  Vec2 point;
  int edge = -1;
  int vertex = -1;
};

/// Returns zero or two points. Curves that only touch the triangle yield no
/// points. Throws GeometryError when the at-most-two-points-on-different-edges
/// requirement fails.
std::vector<EdgeHit> edge_intersections(const std::array<Vec2, 3>& tri, const InterfaceCurve& curve);

/// Per-element interface geometry in the chord frame: origin at the chord
/// midpoint, r along tau, s along eta (eta points out of the minus part).
struct CutElement {
  std::size_t element = 0;
  int degree = 0;
  std::array<Vec2, 3> corners{};
  double element_diameter = 0.0;
  const InterfaceCurve* curve = nullptr;  // not owned; must outlive this object

  Vec2 y, z;  // chord endpoints, y at r = -r_T/2
  double chord_length = 0.0;
  Vec2 midpoint, tau, eta;

  /// gauss_r[l][i], gauss_s[l][i]: chord coordinate of the (l+1)-point Gauss
  /// node i and the height of its projection onto the curve, l = 0..degree.
  std::vector<std::vector<double>> gauss_r;
  std::vector<std::vector<double>> gauss_s;

  double area_minus = 0.0;
  double area_plus = 0.0;

  Vec2 to_physical(double r, double s) const { return midpoint + r * tau + s * eta; }
  /// (r, s) chord coordinates of a physical point.
  std::array<double, 2> to_chord(const Vec2& x) const {
    const Vec2 d = x - midpoint;
    return {dot(d, tau), dot(d, eta)};
  }
  Vec2 chord_point(int level, int i) const { return to_physical(gauss_r[level][i], 0.0); }
  Vec2 projection(int level, int i) const { return to_physical(gauss_r[level][i], gauss_s[level][i]); }
};

/// Builds the chord frame, Gauss projections and sub-areas for a cut triangle.
CutElement cut_element(std::size_t element, const std::array<Vec2, 3>& tri, const std::vector<EdgeHit>& hits,
                       const InterfaceCurve& curve, int degree);

/// Signed distance gamma(r) from the chord point at r to the curve along eta;
/// positive when the curve lies on the +eta side of the chord.
double sliver_height(const CutElement& cut, double r);
/// d gamma / d r from the implicit-function derivative.
double sliver_slope(const CutElement& cut, double r, double gamma);

/// Result of classifying every element of a mesh against the interface.
struct CutMesh {
  std::vector<ElementClass> classes;
  std::vector<CutElement> cuts;
  std::vector<int> cut_index;  // element -> index into cuts, -1 if uncut

  std::size_t num_cut() const { return cuts.size(); }
};

/// Partitions the mesh into minus, plus and cut elements. Uncut elements are
/// classified by the sign of phi at their centroid.
CutMesh classify_elements(const Mesh& mesh, const InterfaceCurve& curve, int degree);

/// Lagrange-node side rule: nodes on the curve belong to the minus side.
inline Side node_side(double phi_value) { return phi_value <= 1e-12 ? Side::Minus : Side::Plus; }

}  // namespace ifem
