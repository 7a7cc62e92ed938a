#include "ifem/interface_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <regex>

#include "ifem/quadrature.hpp"

namespace ifem {

Vec2 InterfaceCurve::normal(const Vec2& x) const {
  const Vec2 g = grad(x);
  return g / norm(g);
}

double InterfaceCurve::curvature(const Vec2& x) const {
  const Vec2 g = grad(x);
  const Sym2 H = hessian(x);
  const double gn = norm(g);
  return (H.xx * g.y * g.y - 2.0 * H.xy * g.x * g.y + H.yy * g.x * g.x) / (gn * gn * gn);
}

std::array<Taylor2, 2> InterfaceCurve::position_jet(double s0, int order) const {
  std::array<Taylor2, 2> out{Taylor2::zero(order), Taylor2::zero(order)};
  for (int c = 0; c < 2; ++c) {
    const Series s = series_by_central_differences(
        [&](double s) {
          const Vec2 p = point_at(s);
          return c == 0 ? p.x : p.y;
        },
        s0, order, 1e-2);
    for (int m = 0; m <= order; ++m) out[static_cast<std::size_t>(c)].coeff(m, 0) = s.coeff(m);
  }
  return out;
}

Series InterfaceCurve::curvature_jet(double s0, int depth) const {
  if (depth == 0) return Series::constant(curvature(point_at(s0)), 0);
  return series_by_central_differences([&](double s) { return curvature(point_at(s)); }, s0, depth, 1e-2);
}

// ---------------------------------------------------------------------------

LineCurve::LineCurve(double a, double b, double c) {
  const double len = std::hypot(a, b);
  if (!(len > 0.0)) throw DataError("line: coefficients a and b must not both vanish");
  n_ = Vec2(a, b) / len;
  c_ = c / len;
  origin_ = c_ * n_;
}

double LineCurve::phi(const Vec2& x) const { return dot(n_, x) - c_; }
Vec2 LineCurve::grad(const Vec2&) const { return n_; }
Sym2 LineCurve::hessian(const Vec2&) const { return {}; }
double LineCurve::arc_coordinate(const Vec2& x) const { return dot(x - origin_, rot90(n_)); }
Vec2 LineCurve::point_at(double s) const { return origin_ + s * rot90(n_); }

std::array<Taylor2, 2> LineCurve::position_jet(double s0, int order) const {
  const Taylor2 s = Taylor2::variable(s0, 0, order);
  const Vec2 t = rot90(n_);
  return {Taylor2(origin_.x) + s * t.x, Taylor2(origin_.y) + s * t.y};
}

Series LineCurve::curvature_jet(double, int depth) const { return Series::constant(0.0, depth); }

std::string LineCurve::describe() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "line{%.17g,%.17g,%.17g}", n_.x, n_.y, c_);
  return buf;
}

CircleCurve::CircleCurve(double cx, double cy, double radius) : center_(cx, cy), radius_(radius) {
  if (!(radius > 0.0)) throw DataError("circle: radius must be positive");
}

double CircleCurve::phi(const Vec2& x) const { return norm(x - center_) - radius_; }

Vec2 CircleCurve::grad(const Vec2& x) const {
  const Vec2 d = x - center_;
  const double r = norm(d);
  if (r == 0.0) return {1.0, 0.0};
  return d / r;
}

Sym2 CircleCurve::hessian(const Vec2& x) const {
  const Vec2 d = x - center_;
  const double r = norm(d);
  if (r == 0.0) return {};
  const double r3 = r * r * r;
  return {d.y * d.y / r3, -d.x * d.y / r3, d.x * d.x / r3};
}

double CircleCurve::arc_coordinate(const Vec2& x) const {
  const Vec2 d = x - center_;
  double theta = std::atan2(d.y, d.x);
  if (theta < 0) theta += 2.0 * std::numbers::pi;
  return radius_ * theta;
}

Vec2 CircleCurve::point_at(double s) const {
  const double theta = s / radius_;
  return center_ + radius_ * Vec2(std::cos(theta), std::sin(theta));
}

std::optional<double> CircleCurve::arc_length() const { return 2.0 * std::numbers::pi * radius_; }

std::array<Taylor2, 2> CircleCurve::position_jet(double s0, int order) const {
  const Taylor2 theta = Taylor2::variable(s0, 0, order) * (1.0 / radius_);
  return {Taylor2(center_.x) + radius_ * cos(theta), Taylor2(center_.y) + radius_ * sin(theta)};
}

Series CircleCurve::curvature_jet(double, int depth) const { return Series::constant(1.0 / radius_, depth); }

std::string CircleCurve::describe() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "circle{%.17g,%.17g,%.17g}", center_.x, center_.y, radius_);
  return buf;
}

std::unique_ptr<InterfaceCurve> make_curve(const std::string& spec) {
  static const std::regex re(R"(\s*(line|circle)\s*\{([^}]*)\}\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw ParseError("unknown curve '" + spec + "'; expected line{a,b,c} or circle{cx,cy,R}");
  std::vector<double> v;
  const std::string args = m[2].str();
  std::size_t pos = 0;
  while (pos <= args.size()) {
    const std::size_t comma = args.find(',', pos);
    const std::string tok = args.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("curve '" + spec + "': malformed number '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (v.size() != 3) throw ParseError("curve '" + spec + "': expected three numbers");
  if (m[1] == "line") return std::make_unique<LineCurve>(v[0], v[1], v[2]);
  return std::make_unique<CircleCurve>(v[0], v[1], v[2]);
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kEdgeSamples = 8;
constexpr double kSnap = 1e-9;

double diameter_of(const std::array<Vec2, 3>& tri) {
  return std::max({norm(tri[1] - tri[0]), norm(tri[2] - tri[1]), norm(tri[0] - tri[2])});
}

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Root of psi on [lo, hi] given a strict sign change; bisection to a small
// bracket followed by safeguarded Newton.
template <class F, class DF>
double bracketed_root(F psi, DF dpsi, double lo, double hi, double tol) {
  double flo = psi(lo);
  const double w0 = hi - lo;
  for (int it = 0; it < 200 && hi - lo > 1e-3 * w0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = psi(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    const double f = psi(x);
    if (f == 0.0) return x;
    if (sign_of(f) == sign_of(flo)) {
      lo = x;
      flo = f;
    } else {
      hi = x;
    }
    const double d = dpsi(x);
    double next = (d != 0.0) ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tol) return next;
    x = next;
  }
  return x;
}

std::string element_message(const std::array<Vec2, 3>& tri, const std::string& what) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s on triangle (%.6g,%.6g) (%.6g,%.6g) (%.6g,%.6g); refine the mesh", what.c_str(),
                tri[0].x, tri[0].y, tri[1].x, tri[1].y, tri[2].x, tri[2].y);
  return buf;
}

}  // namespace

std::vector<EdgeHit> edge_intersections(const std::array<Vec2, 3>& tri, const InterfaceCurve& curve) {
  const double hT = diameter_of(tri);
  const Vec2 centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
  const double gscale = std::max(norm(curve.grad(centroid)), 1e-300);
  const double snap = kSnap * hT * gscale;

  std::array<double, 3> pv{};
  std::array<int, 3> sv{};
  double min_abs = INFINITY;
  for (int i = 0; i < 3; ++i) {
    pv[static_cast<std::size_t>(i)] = curve.phi(tri[static_cast<std::size_t>(i)]);
    if (std::abs(pv[static_cast<std::size_t>(i)]) <= snap) pv[static_cast<std::size_t>(i)] = 0.0;
    sv[static_cast<std::size_t>(i)] = sign_of(pv[static_cast<std::size_t>(i)]);
    min_abs = std::min(min_abs, std::abs(pv[static_cast<std::size_t>(i)]));
  }
  if (sv[0] == sv[1] && sv[1] == sv[2] && sv[0] != 0 && min_abs > 2.0 * hT * gscale) return {};

  std::vector<EdgeHit> crossings;
  std::vector<EdgeHit> vertex_hits;
  for (int i = 0; i < 3; ++i) {
    if (sv[static_cast<std::size_t>(i)] == 0) vertex_hits.push_back({tri[static_cast<std::size_t>(i)], -1, i});
  }

  const double tol_t = 1e-15;
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = tri[static_cast<std::size_t>(e)];
    const Vec2 b = tri[static_cast<std::size_t>((e + 1) % 3)];
    const Vec2 d = b - a;
    auto psi = [&](double t) { return curve.phi(a + t * d); };
    auto dpsi = [&](double t) { return dot(curve.grad(a + t * d), d); };
    std::array<double, kEdgeSamples + 1> ts{}, ps{};
    for (int j = 0; j <= kEdgeSamples; ++j) {
      ts[static_cast<std::size_t>(j)] = static_cast<double>(j) / kEdgeSamples;
      ps[static_cast<std::size_t>(j)] = psi(ts[static_cast<std::size_t>(j)]);
    }
    ps[0] = pv[static_cast<std::size_t>(e)];
    ps[kEdgeSamples] = pv[static_cast<std::size_t>((e + 1) % 3)];
    int zeros = 0;
    for (int j = 1; j < kEdgeSamples; ++j) {
      double& p = ps[static_cast<std::size_t>(j)];
      if (std::abs(p) <= snap) p = 0.0;
      zeros += p == 0.0 ? 1 : 0;
    }
    // the edge lies on the curve; its end vertices are the only hits
    if (zeros == kEdgeSamples - 1) continue;

    int on_edge = 0;
    for (int j = 0; j < kEdgeSamples; ++j) {
      const double p0 = ps[static_cast<std::size_t>(j)], p1 = ps[static_cast<std::size_t>(j + 1)];
      if (j > 0 && p0 == 0.0) {
        crossings.push_back({a + ts[static_cast<std::size_t>(j)] * d, e, -1});
        ++on_edge;
        continue;
      }
      if (sign_of(p0) * sign_of(p1) < 0) {
        const double t = bracketed_root(psi, dpsi, ts[static_cast<std::size_t>(j)], ts[static_cast<std::size_t>(j + 1)], tol_t);
        crossings.push_back({a + t * d, e, -1});
        ++on_edge;
      }
    }
    // A local extremum of |phi| between samples of equal sign may hide a
    // tangency or a pair of close crossings.
    for (int j = 1; j < kEdgeSamples; ++j) {
      const double pl = ps[static_cast<std::size_t>(j - 1)], pc = ps[static_cast<std::size_t>(j)],
                   pr = ps[static_cast<std::size_t>(j + 1)];
      const int s = sign_of(pc);
      if (s == 0 || sign_of(pl) != s || sign_of(pr) != s) continue;
      if (!(std::abs(pc) <= std::abs(pl) && std::abs(pc) <= std::abs(pr))) continue;
      double lo = ts[static_cast<std::size_t>(j - 1)], hi = ts[static_cast<std::size_t>(j + 1)];
      const double g = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = s * psi(x1), f2 = s * psi(x2);
      for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = s * psi(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = s * psi(x2);
        }
      }
      if (std::min(f1, f2) <= snap) throw GeometryError(element_message(tri, "interface tangent to an edge or crossing it twice"));
    }
    if (on_edge > 1) throw GeometryError(element_message(tri, "interface crosses one edge more than once"));
  }

  const std::size_t total = crossings.size() + vertex_hits.size();
  if (total <= 1) return {};
  if (total > 2) throw GeometryError(element_message(tri, "interface meets the element boundary at more than two points"));

  if (vertex_hits.size() == 2) {
    const int i = vertex_hits[0].vertex, j = vertex_hits[1].vertex;
    const int m = 3 - i - j;
    const Vec2 mid = 0.5 * (tri[static_cast<std::size_t>(i)] + tri[static_cast<std::size_t>(j)]);
    const double pm = curve.phi(mid);
    if (std::abs(pm) <= snap || sign_of(pm) == sv[static_cast<std::size_t>(m)]) return {};
    return vertex_hits;
  }
  if (vertex_hits.size() == 1) {
    const int i = vertex_hits[0].vertex;
    const int e = crossings[0].edge;
    if (e == i || (e + 1) % 3 == i) throw GeometryError(element_message(tri, "interface meets one edge at two points"));
    return {vertex_hits[0], crossings[0]};
  }
  if (crossings[0].edge == crossings[1].edge)
    throw GeometryError(element_message(tri, "interface crosses one edge more than once"));
  return crossings;
}

namespace {

// Height s with phi(base + s*eta) = 0 closest to the first-order guess.
double project_along(const InterfaceCurve& curve, const Vec2& base, const Vec2& eta, double hT) {
  auto psi = [&](double s) { return curve.phi(base + s * eta); };
  auto dpsi = [&](double s) { return dot(curve.grad(base + s * eta), eta); };
  const double p0 = psi(0.0);
  if (p0 == 0.0) return 0.0;
  const double d0 = dpsi(0.0);
  double guess = (d0 != 0.0) ? -p0 / d0 : 0.0;
  if (!std::isfinite(guess) || std::abs(guess) > hT) guess = 0.0;
  double width = std::max(std::abs(guess), 1e-3 * hT);
  const double tol = 1e-16 * hT;
  for (int it = 0; it < 60; ++it) {
    const double lo = guess - width, hi = guess + width;
    const double flo = psi(lo), fhi = psi(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (sign_of(flo) != sign_of(fhi)) return bracketed_root(psi, dpsi, lo, hi, tol);
    width *= 2.0;
    if (width > 2.0 * hT) break;
  }
  throw GeometryError("projection onto the interface failed to bracket a root");
}

}  // namespace

double sliver_height(const CutElement& cut, double r) {
  return project_along(*cut.curve, cut.to_physical(r, 0.0), cut.eta, cut.element_diameter);
}

double sliver_slope(const CutElement& cut, double r, double gamma) {
  const Vec2 g = cut.curve->grad(cut.to_physical(r, gamma));
  const double ge = dot(g, cut.eta);
  if (ge == 0.0) throw GeometryError("interface parallel to the chord normal inside a cut element");
  return -dot(g, cut.tau) / ge;
}

CutElement cut_element(std::size_t element, const std::array<Vec2, 3>& tri, const std::vector<EdgeHit>& hits,
                       const InterfaceCurve& curve, int degree) {
  if (hits.size() != 2) throw GeometryError("cut_element: expected two intersection points");
  if (degree < 0) throw std::invalid_argument("cut_element: negative degree");
  CutElement c;
  c.element = element;
  c.degree = degree;
  c.corners = tri;
  c.element_diameter = diameter_of(tri);
  c.curve = &curve;

  Vec2 y = hits[0].point, z = hits[1].point;
  c.chord_length = norm(z - y);
  if (!(c.chord_length > 1e-12 * c.element_diameter)) throw GeometryError(element_message(tri, "degenerate chord"));
  c.midpoint = 0.5 * (y + z);
  Vec2 tau = (z - y) / c.chord_length;
  Vec2 eta{tau.y, -tau.x};
  c.tau = tau;
  c.eta = eta;
  const double s_mid = project_along(curve, c.midpoint, eta, c.element_diameter);
  if (dot(eta, curve.grad(c.midpoint + s_mid * eta)) < 0.0) {
    std::swap(y, z);
    c.tau = -tau;
    c.eta = -eta;
  }
  c.y = y;
  c.z = z;

  c.gauss_r.resize(static_cast<std::size_t>(degree) + 1);
  c.gauss_s.resize(static_cast<std::size_t>(degree) + 1);
  for (int l = 0; l <= degree; ++l) {
    const Rule1D g = gauss_legendre(l + 1);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double r = 0.5 * c.chord_length * g.nodes[i];
      c.gauss_r[static_cast<std::size_t>(l)].push_back(r);
      c.gauss_s[static_cast<std::size_t>(l)].push_back(sliver_height(c, r));
    }
  }

  const int n = std::max(degree + 2, 3);
  c.area_minus = integrate_cut_region(c, Side::Minus, [](const Vec2&) { return 1.0; }, n, 1);
  c.area_plus = integrate_cut_region(c, Side::Plus, [](const Vec2&) { return 1.0; }, n, 1);
  return c;
}

CutMesh classify_elements(const Mesh& mesh, const InterfaceCurve& curve, int degree) {
  CutMesh cm;
  cm.classes.resize(mesh.num_triangles());
  cm.cut_index.assign(mesh.num_triangles(), -1);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto tri = mesh.corners(t);
    const auto hits = edge_intersections(tri, curve);
    if (hits.empty()) {
      const Vec2 centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
      cm.classes[t] = curve.phi(centroid) <= 0.0 ? ElementClass::Minus : ElementClass::Plus;
      continue;
    }
    cm.classes[t] = ElementClass::Cut;
    cm.cut_index[t] = static_cast<int>(cm.cuts.size());
    cm.cuts.push_back(cut_element(t, tri, hits, curve, degree));
  }
  return cm;
}

}  // namespace ifem
