#include "ifem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace ifem {

double QuadratureRule::sum(const std::function<double(const Vec2&)>& f) const {
  double s = 0.0;
  for (std::size_t q = 0; q < points.size(); ++q) s += weights[q] * f(points[q]);
  return s;
}

Rule1D gauss_legendre(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("gauss_legendre: n must be in [1, 20]");
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

QuadratureRule triangle_rule(int d) {
  if (d < 0 || d > 10) throw std::invalid_argument("triangle_rule: degree must be in [0, 10]");
  QuadratureRule q;
  if (d <= 1) {
    q.points = {{1.0 / 3.0, 1.0 / 3.0}};
    q.weights = {0.5};
    return q;
  }
  if (d == 2) {
    q.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    q.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return q;
  }
  if (d <= 5) {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w1 = (155.0 - s15) / 2400.0, w2 = (155.0 + s15) / 2400.0;
    q.points = {{1.0 / 3.0, 1.0 / 3.0}, {a1, a1}, {b1, a1}, {a1, b1}, {a2, a2}, {b2, a2}, {a2, b2}};
    q.weights = {9.0 / 80.0, w1, w1, w1, w2, w2, w2};
    return q;
  }
  // Collapsed tensor Gauss: x = u, y = (1 - u) v, Jacobian (1 - u).
  const int m = (d + 3) / 2;
  const Rule1D g = gauss_legendre(m);
  for (int i = 0; i < m; ++i) {
    const double u = 0.5 * (1.0 + g.nodes[static_cast<std::size_t>(i)]);
    const double wu = 0.5 * g.weights[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const double v = 0.5 * (1.0 + g.nodes[static_cast<std::size_t>(j)]);
      const double wv = 0.5 * g.weights[static_cast<std::size_t>(j)];
      q.points.emplace_back(u, (1.0 - u) * v);
      q.weights.push_back(wu * wv * (1.0 - u));
    }
  }
  return q;
}

QuadratureRule map_to_triangle(const QuadratureRule& ref, const std::array<Vec2, 3>& tri) {
  const Vec2 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
  const double jac = std::abs(cross(e1, e2));
  QuadratureRule out;
  out.points.reserve(ref.size());
  out.weights.reserve(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    out.points.push_back(tri[0] + ref.points[q].x * e1 + ref.points[q].y * e2);
    out.weights.push_back(ref.weights[q] * jac);
  }
  return out;
}

std::vector<std::array<Vec2, 3>> chord_polygon_triangles(const CutElement& cut, Side side) {
  const double sgn = side == Side::Minus ? -1.0 : 1.0;
  auto inside = [&](const Vec2& p) { return sgn * dot(p - cut.midpoint, cut.eta); };
  std::vector<Vec2> poly;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = cut.corners[static_cast<std::size_t>(i)];
    const Vec2 b = cut.corners[static_cast<std::size_t>((i + 1) % 3)];
    const double da = inside(a), db = inside(b);
    if (da >= 0.0) poly.push_back(a);
    if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) poly.push_back(a + (da / (da - db)) * (b - a));
  }
  std::vector<std::array<Vec2, 3>> tris;
  if (poly.size() == 3) {
    tris.push_back({poly[0], poly[1], poly[2]});
  } else if (poly.size() == 4) {
    if (norm(poly[2] - poly[0]) <= norm(poly[3] - poly[1])) {
      tris.push_back({poly[0], poly[1], poly[2]});
      tris.push_back({poly[0], poly[2], poly[3]});
    } else {
      tris.push_back({poly[1], poly[2], poly[3]});
      tris.push_back({poly[1], poly[3], poly[0]});
    }
  } else if (poly.size() > 4) {
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) tris.push_back({poly[0], poly[i], poly[i + 1]});
  }
  const double floor = 1e-14 * cut.element_diameter * cut.element_diameter;
  std::erase_if(tris, [&](const auto& t) { return std::abs(cross(t[1] - t[0], t[2] - t[0])) <= floor; });
  return tris;
}

QuadratureRule cut_region_rule(const CutElement& cut, Side side, int n, int tri_degree) {
  if (tri_degree < 0) tri_degree = default_triangle_degree(n);
  QuadratureRule out;
  const QuadratureRule ref = triangle_rule(tri_degree);
  for (const auto& t : chord_polygon_triangles(cut, side)) {
    const QuadratureRule q = map_to_triangle(ref, t);
    out.points.insert(out.points.end(), q.points.begin(), q.points.end());
    out.weights.insert(out.weights.end(), q.weights.begin(), q.weights.end());
  }
  // Positive gamma: the sliver sits on the +eta side of the chord, inside
  // the minus region.
  const double sgn = side == Side::Minus ? 1.0 : -1.0;
  const Rule1D g = gauss_legendre(n);
  const double half = 0.5 * cut.chord_length;
  for (int i = 0; i < n; ++i) {
    const double r = half * g.nodes[static_cast<std::size_t>(i)];
    const double gamma = sliver_height(cut, r);
    if (gamma == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double s = 0.5 * gamma * (1.0 + g.nodes[static_cast<std::size_t>(j)]);
      out.points.push_back(cut.to_physical(r, s));
      out.weights.push_back(sgn * half * g.weights[static_cast<std::size_t>(i)] * 0.5 * gamma *
                            g.weights[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

double integrate_cut_region(const CutElement& cut, Side side, const std::function<double(const Vec2&)>& f, int n,
                            int tri_degree) {
  return cut_region_rule(cut, side, n, tri_degree).sum(f);
}

QuadratureRule interface_rule(const CutElement& cut, int n) {
  const Rule1D g = gauss_legendre(n);
  const double half = 0.5 * cut.chord_length;
  QuadratureRule out;
  for (int i = 0; i < n; ++i) {
    const double r = half * g.nodes[static_cast<std::size_t>(i)];
    const double gamma = sliver_height(cut, r);
    const double slope = sliver_slope(cut, r, gamma);
    out.points.push_back(cut.to_physical(r, gamma));
    out.weights.push_back(half * g.weights[static_cast<std::size_t>(i)] * std::sqrt(1.0 + slope * slope));
  }
  return out;
}

double integrate_interface_segment(const CutElement& cut, const std::function<double(const Vec2&)>& g, int n) {
  return interface_rule(cut, n).sum(g);
}

}  // namespace ifem
