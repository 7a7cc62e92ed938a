#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ifem/interface_geometry.hpp"
#include "ifem/quadrature.hpp"
#include "oracles.hpp"

using namespace ifem;

namespace {

const std::array<Vec2, 3> kRef{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};

// Circle that does not override position_jet, to exercise the default.
class PlainCircle final : public InterfaceCurve {
 public:
  explicit PlainCircle(double r) : c_(0.1, -0.2, r) {}
  double phi(const Vec2& x) const override { return c_.phi(x); }
  Vec2 grad(const Vec2& x) const override { return c_.grad(x); }
  Sym2 hessian(const Vec2& x) const override { return c_.hessian(x); }
  double arc_coordinate(const Vec2& x) const override { return c_.arc_coordinate(x); }
  Vec2 point_at(double s) const override { return c_.point_at(s); }
  std::string describe() const override { return "plain"; }

 private:
  CircleCurve c_;
};

}  // namespace

TEST(Curves, LineFrameAndParametrization) {
  const LineCurve line(2.0, 0.0, 2.0 / 3.0);  // x = 1/3
  EXPECT_NEAR(line.phi({1.0 / 3.0, 0.7}), 0.0, 1e-15);
  EXPECT_LT(line.phi({0.0, 0.0}), 0.0);
  const Vec2 n = line.normal({0.2, 0.1});
  EXPECT_NEAR(n.x, 1.0, 1e-15);
  EXPECT_NEAR(line.tangent({0.2, 0.1}).y, 1.0, 1e-15);
  EXPECT_EQ(line.curvature({0, 0}), 0.0);
  for (double s : {-1.3, 0.0, 0.8}) EXPECT_NEAR(line.arc_coordinate(line.point_at(s)), s, 1e-14);
  EXPECT_FALSE(line.arc_length().has_value());
}

TEST(Curves, CircleFrameCurvatureAndArcLength) {
  const CircleCurve c(0.2, -0.1, 0.6);
  const Vec2 x = c.point_at(0.5);
  EXPECT_NEAR(c.phi(x), 0.0, 1e-15);
  const Vec2 n = c.normal(x);
  EXPECT_NEAR(n.x, std::cos(0.5 / 0.6), 1e-14);
  EXPECT_NEAR(n.y, std::sin(0.5 / 0.6), 1e-14);
  // the generic level-set curvature agrees with 1/R
  EXPECT_NEAR(c.InterfaceCurve::curvature(x), 1.0 / 0.6, 1e-12);
  EXPECT_NEAR(*c.arc_length(), 2 * std::numbers::pi * 0.6, 1e-14);
  // tangent is the direction of increasing arc length
  const Vec2 d = (c.point_at(0.5 + 1e-6) - c.point_at(0.5 - 1e-6)) / 2e-6;
  EXPECT_NEAR(dot(d, c.tangent(x)), 1.0, 1e-9);
  EXPECT_THROW(CircleCurve(0, 0, 0.0), DataError);
}

TEST(Curves, DefaultPositionJetMatchesAnalytic) {
  const PlainCircle plain(0.7);
  const CircleCurve exact(0.1, -0.2, 0.7);
  for (double s : {0.0, 1.1, 3.0}) {
    const auto a = plain.position_jet(s, 4);
    const auto b = exact.position_jet(s, 4);
    for (int c = 0; c < 2; ++c)
      for (int m = 0; m <= 4; ++m)
        EXPECT_NEAR(a[static_cast<std::size_t>(c)].derivative(m, 0), b[static_cast<std::size_t>(c)].derivative(m, 0),
                    2e-6)
            << "s=" << s << " c=" << c << " m=" << m;
    EXPECT_NEAR(plain.curvature_jet(s, 2).value(), 1.0 / 0.7, 1e-6);
  }
}

TEST(Curves, CatalogParsing) {
  auto line = make_curve("line{1, 0, 0.3333}");
  EXPECT_NEAR(line->phi({0.3333, 0.0}), 0.0, 1e-15);
  auto circle = make_curve("circle{0,0,0.5}");
  EXPECT_NEAR(circle->phi({0.5, 0.0}), 0.0, 1e-15);
  EXPECT_THROW(make_curve("ellipse{1,2,3}"), ParseError);
  EXPECT_THROW(make_curve("circle{0,0}"), ParseError);
  EXPECT_THROW(make_curve("line{1,a,0}"), ParseError);
  EXPECT_NE(circle->describe().find("circle"), std::string::npos);
}

TEST(EdgeIntersections, LineThroughTwoEdges) {
  const LineCurve line(1.0, 0.0, 0.25);
  const auto hits = edge_intersections(kRef, line);
  ASSERT_EQ(hits.size(), 2u);
  for (const auto& h : hits) {
    EXPECT_NEAR(h.point.x, 0.25, 1e-14);
    EXPECT_EQ(h.vertex, -1);
  }
  EXPECT_NE(hits[0].edge, hits[1].edge);
}

TEST(EdgeIntersections, MissAndTouch) {
  EXPECT_TRUE(edge_intersections(kRef, LineCurve(1.0, 0.0, 2.0)).empty());
  // hypotenuse lies on the curve: both vertices hit, no proper cut
  EXPECT_TRUE(edge_intersections(kRef, LineCurve(1.0, 1.0, 1.0)).empty());
  // touching a single vertex only
  EXPECT_TRUE(edge_intersections(kRef, LineCurve(1.0, 1.0, 0.0)).empty());
}

TEST(EdgeIntersections, VertexAndOppositeEdge) {
  const LineCurve diag(1.0, -1.0, 0.0);  // y = x through vertex 0
  const auto hits = edge_intersections(kRef, diag);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].vertex, 0);
  EXPECT_EQ(hits[1].edge, 1);
  EXPECT_NEAR(hits[1].point.x, 0.5, 1e-14);
}

TEST(EdgeIntersections, TangencyAndDoubleCrossingFail) {
  EXPECT_THROW(edge_intersections(kRef, CircleCurve(0.45, -0.3, 0.3)), GeometryError);
  EXPECT_THROW(edge_intersections(kRef, CircleCurve(0.5, -0.2, 0.3)), GeometryError);
}

TEST(CutElementTest, FrameAreasAndProjections) {
  const CircleCurve circle(-0.3, -0.2, 0.8);
  const auto hits = edge_intersections(kRef, circle);
  ASSERT_EQ(hits.size(), 2u);
  const CutElement cut = cut_element(7, kRef, hits, circle, 3);
  EXPECT_EQ(cut.element, 7u);
  EXPECT_NEAR(norm(cut.tau), 1.0, 1e-15);
  EXPECT_NEAR(dot(cut.tau, cut.eta), 0.0, 1e-15);
  EXPECT_NEAR(norm(cut.z - cut.y), cut.chord_length, 1e-15);
  // eta points from the minus part into the plus part
  EXPECT_GT(dot(cut.eta, circle.normal(cut.midpoint)), 0.0);
  ASSERT_EQ(cut.gauss_r.size(), 4u);
  for (int l = 0; l <= 3; ++l) {
    ASSERT_EQ(cut.gauss_r[static_cast<std::size_t>(l)].size(), static_cast<std::size_t>(l + 1));
    for (int i = 0; i <= l; ++i) {
      EXPECT_NEAR(circle.phi(cut.projection(l, i)), 0.0, 1e-14);
      EXPECT_LE(std::abs(cut.gauss_r[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)]),
                cut.chord_length / 2);
    }
  }
  EXPECT_NEAR(cut.area_minus + cut.area_plus, 0.5, 1e-13);
  // independent oracle for the enclosed area: clipped polygon plus segment
  const Vec2 toward = (cut.midpoint - circle.center()) / norm(cut.midpoint - circle.center());
  const auto inner = oracle::clip_half_plane({kRef[0], kRef[1], kRef[2]}, cut.midpoint, toward);
  const double expect = oracle::polygon_moments(inner).area +
                        oracle::circular_segment(circle.center(), 0.8, cut.chord_length, toward).area;
  // the stored area uses a low-order rule; a long chord on a tight circle
  // needs more points for full accuracy
  EXPECT_NEAR(cut.area_minus, expect, 1e-6 * expect);
  EXPECT_NEAR(integrate_cut_region(cut, Side::Minus, [](const Vec2&) { return 1.0; }, 20), expect, 1e-13);
}

TEST(CutElementTest, LineCutAreas) {
  const LineCurve line(1.0, 0.0, 0.25);
  const CutElement cut = cut_element(0, kRef, edge_intersections(kRef, line), line, 2);
  EXPECT_NEAR(cut.area_minus, 0.5 - 0.5 * 0.75 * 0.75, 1e-14);
  EXPECT_NEAR(cut.eta.x, 1.0, 1e-15);
  for (const auto& row : cut.gauss_s)
    for (double s : row) EXPECT_NEAR(s, 0.0, 1e-15);
  const auto rs = cut.to_chord(cut.to_physical(0.1, -0.2));
  EXPECT_NEAR(rs[0], 0.1, 1e-15);
  EXPECT_NEAR(rs[1], -0.2, 1e-15);
  EXPECT_THROW(cut_element(0, kRef, {}, line, 2), GeometryError);
}

TEST(Sliver, HeightMatchesCircleGeometryAndSlopeMatchesDifferences) {
  const CircleCurve circle(1.2, 1.2, 1.3);
  const auto hits = edge_intersections(kRef, circle);
  ASSERT_EQ(hits.size(), 2u);
  const CutElement cut = cut_element(0, kRef, hits, circle, 2);
  for (double f : {-0.45, -0.2, 0.0, 0.3, 0.5}) {
    const double r = f * cut.chord_length;
    const Vec2 d = cut.to_physical(r, 0.0) - circle.center();
    const double de = dot(d, cut.eta);
    const double disc = std::sqrt(de * de - dot(d, d) + 1.69);
    const double s1 = -de + disc, s2 = -de - disc;
    const double expect = std::abs(s1) < std::abs(s2) ? s1 : s2;
    const double g = sliver_height(cut, r);
    EXPECT_NEAR(g, expect, 1e-14);
    const double h = 1e-5;
    const double fd = (sliver_height(cut, r + h) - sliver_height(cut, r - h)) / (2 * h);
    EXPECT_NEAR(sliver_slope(cut, r, g), fd, 1e-8);
  }
  EXPECT_NEAR(sliver_height(cut, -cut.chord_length / 2), 0.0, 1e-14);
}

TEST(Classify, LineOnStructuredMesh) {
  const Mesh m = build_structured(8);
  const LineCurve line(1.0, 0.0, 1.0 / 3.0);
  const CutMesh cm = classify_elements(m, line, 2);
  EXPECT_EQ(cm.num_cut(), 16u);
  std::size_t minus = 0;
  double area = 0.0;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    if (cm.classes[t] == ElementClass::Minus) {
      ++minus;
      area += m.area(t);
    }
    if (cm.cut_index[t] >= 0) {
      const auto& c = cm.cuts[static_cast<std::size_t>(cm.cut_index[t])];
      EXPECT_EQ(c.element, t);
      area += c.area_minus;
    }
  }
  EXPECT_EQ(minus, 2u * 8u * 5u);
  EXPECT_NEAR(area, 2.0 * (1.0 / 3.0 + 1.0), 1e-12);
}

TEST(Classify, CircleAreaConverges) {
  const Mesh m = build_structured(16);
  const CircleCurve circle(0.0, 0.0, 0.5);
  const CutMesh cm = classify_elements(m, circle, 2);
  double area = 0.0;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    if (cm.classes[t] == ElementClass::Minus) area += m.area(t);
    if (cm.cut_index[t] >= 0) area += cm.cuts[static_cast<std::size_t>(cm.cut_index[t])].area_minus;
  }
  EXPECT_NEAR(area, std::numbers::pi * 0.25, 1e-10);
}

TEST(NodeSide, CurveNodesBelongToMinus) {
  EXPECT_EQ(node_side(0.0), Side::Minus);
  EXPECT_EQ(node_side(-1.0), Side::Minus);
  EXPECT_EQ(node_side(1e-3), Side::Plus);
}
