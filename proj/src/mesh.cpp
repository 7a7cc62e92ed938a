#include "ifem/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace ifem {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) { return 0.5 * cross(b - a, c - a); }

std::array<int, 2> edge_key(int a, int b) { return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a}; }

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<int>(vertices_.size());
  double extent = 0.0;
  for (const auto& v : vertices_) extent = std::max({extent, std::abs(v.x), std::abs(v.y)});
  const double area_floor = 1e-14 * std::max(extent * extent, 1e-300);

  areas_.reserve(triangles_.size());
  diameters_.reserve(triangles_.size());
  std::map<std::array<int, 2>, int> edge_count;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) throw ParseError("triangle " + std::to_string(t) + " references vertex " + std::to_string(v) + " out of range");
    }
    double a = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (std::abs(a) <= area_floor) throw ParseError("triangle " + std::to_string(t) + " has non-positive area");
    if (a < 0) {
      std::swap(tri[1], tri[2]);
      a = -a;
    }
    areas_.push_back(a);
    const Vec2 p0 = vertices_[tri[0]], p1 = vertices_[tri[1]], p2 = vertices_[tri[2]];
    diameters_.push_back(std::max({norm(p1 - p0), norm(p2 - p1), norm(p0 - p2)}));
    for (int e = 0; e < 3; ++e) ++edge_count[edge_key(tri[e], tri[(e + 1) % 3])];
  }
  h_ = diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());

  boundary_vertex_.assign(vertices_.size(), false);
  for (const auto& [edge, count] : edge_count) {
    if (count > 2) throw ParseError("edge (" + std::to_string(edge[0]) + "," + std::to_string(edge[1]) + ") shared by more than two triangles");
    if (count == 1) {
      boundary_edges_.push_back(edge);
      boundary_vertex_[edge[0]] = true;
      boundary_vertex_[edge[1]] = true;
    }
  }
}

std::array<Vec2, 3> Mesh::corners(std::size_t t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

Mesh build_structured(int n) {
  if (n < 1) throw std::invalid_argument("build_structured: n must be >= 1");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) verts.emplace_back(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n);
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // southwest -> northeast diagonal
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(verts), std::move(tris));
}

Mesh build_perturbed(int n, double amplitude, unsigned seed) {
  if (!(amplitude >= 0.0 && amplitude < 0.5)) throw std::invalid_argument("build_perturbed: amplitude must be in [0, 0.5)");
  const Mesh base = build_structured(n);
  std::vector<Vec2> verts = base.vertices();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-amplitude, amplitude);
  const double dx = 2.0 / n;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const double ox = jitter(rng) * dx, oy = jitter(rng) * dx;
    if (base.boundary_vertex()[v]) continue;
    verts[v] += Vec2{ox, oy};
  }
  return Mesh(std::move(verts), base.triangles());
}

Mesh build_distorted(int n, double amplitude) {
  constexpr double pi = 3.14159265358979323846;
  if (!(std::abs(amplitude) < 0.5 / pi)) throw std::invalid_argument("build_distorted: |amplitude| must be below 1/(2 pi)");
  const Mesh base = build_structured(n);
  std::vector<Vec2> verts = base.vertices();
  for (Vec2& v : verts) {
    const double bump = amplitude * std::sin(pi * v.x) * std::sin(pi * v.y);
    v = Vec2{v.x + bump, v.y - bump};
  }
  return Mesh(std::move(verts), base.triangles());
}

namespace {

struct DataLine {
  int number;
  std::vector<std::string> tokens;
};

template <class T>
T parse_number(const std::string& tok, int line) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  std::from_chars_result res{};
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is available in GCC 11
    res = std::from_chars(first, last, value);
  } else {
    res = std::from_chars(first, last, value);
  }
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError("line " + std::to_string(line) + ": malformed number '" + tok + "'");
  return value;
}

}  // namespace

Mesh read_mesh(std::string_view text) {
  std::vector<DataLine> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    DataLine dl{lineno, {}};
    std::string tok;
    while (ls >> tok) dl.tokens.push_back(tok);
    if (!dl.tokens.empty()) lines.push_back(std::move(dl));
  }
  if (lines.empty()) throw ParseError("empty mesh file");
  const auto& header = lines.front();
  if (header.tokens.size() != 2) throw ParseError("line " + std::to_string(header.number) + ": expected 'NV NT' header");
  const long nv = parse_number<long>(header.tokens[0], header.number);
  const long nt = parse_number<long>(header.tokens[1], header.number);
  if (nv < 3 || nt < 1) throw ParseError("line " + std::to_string(header.number) + ": need at least 3 vertices and 1 triangle");

  long found_vertices = 0;
  std::size_t pos = 1;
  while (pos < lines.size() && lines[pos].tokens.size() == 2) {
    ++found_vertices;
    ++pos;
  }
  if (found_vertices != nv)
    throw ParseError("vertex count mismatch: declared " + std::to_string(nv) + ", found " + std::to_string(found_vertices));
  const long found_triangles = static_cast<long>(lines.size() - pos);
  if (found_triangles != nt)
    throw ParseError("triangle count mismatch: declared " + std::to_string(nt) + ", found " + std::to_string(found_triangles));

  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>(nv));
  for (std::size_t i = 1; i < pos; ++i) {
    const auto& dl = lines[i];
    verts.emplace_back(parse_number<double>(dl.tokens[0], dl.number), parse_number<double>(dl.tokens[1], dl.number));
  }
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(nt));
  for (std::size_t i = pos; i < lines.size(); ++i) {
    const auto& dl = lines[i];
    if (dl.tokens.size() != 3) throw ParseError("line " + std::to_string(dl.number) + ": expected 'i j k'");
    Triangle tri{};
    for (int c = 0; c < 3; ++c) {
      tri[static_cast<std::size_t>(c)] = parse_number<int>(dl.tokens[static_cast<std::size_t>(c)], dl.number);
      if (tri[static_cast<std::size_t>(c)] < 0 || tri[static_cast<std::size_t>(c)] >= nv)
        throw ParseError("line " + std::to_string(dl.number) + ": vertex index out of range");
    }
    const double a = signed_area(verts[tri[0]], verts[tri[1]], verts[tri[2]]);
    if (!(std::abs(a) > 0.0)) throw ParseError("line " + std::to_string(dl.number) + ": non-positive-area triangle");
    tris.push_back(tri);
  }
  return Mesh(std::move(verts), std::move(tris));
}

std::string write_mesh(const Mesh& mesh) {
  std::string out = std::to_string(mesh.num_vertices()) + " " + std::to_string(mesh.num_triangles()) + "\n";
  char buf[96];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
    out += buf;
  }
  for (const auto& t : mesh.triangles()) {
    std::snprintf(buf, sizeof buf, "%d %d %d\n", t[0], t[1], t[2]);
    out += buf;
  }
  return out;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return read_mesh(ss.str());
}

// ---------------------------------------------------------------------------

DofMap::DofMap(const Mesh& mesh, int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("DofMap: degree must be >= 1");
  const int npe = nodes_per_element();
  elem_dofs_.resize(mesh.num_triangles() * static_cast<std::size_t>(npe));

  std::map<std::array<int, 2>, bool> is_boundary_edge;
  for (const auto& e : mesh.boundary_edges()) is_boundary_edge[e] = true;

  // Node identity is the exact barycentric lattice position expressed over
  // global vertex ids, so shared nodes match without coordinate tolerances.
  using Key = std::array<int, 6>;
  std::map<Key, int> lookup;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto c = mesh.corners(t);
    int local = 0;
    for (int j = 0; j <= degree; ++j) {
      for (int i = 0; i <= degree - j; ++i, ++local) {
        std::array<std::pair<int, int>, 3> w{{{tri[0], degree - i - j}, {tri[1], i}, {tri[2], j}}};
        std::sort(w.begin(), w.end());
        Key key{};
        int nz = 0;
        for (const auto& [v, wt] : w) {
          if (wt == 0) continue;
          key[static_cast<std::size_t>(2 * nz)] = v;
          key[static_cast<std::size_t>(2 * nz + 1)] = wt;
          ++nz;
        }
        for (int z = nz; z < 3; ++z) key[static_cast<std::size_t>(2 * z)] = -1;
        auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(coords_.size()));
        if (inserted) {
          const double xi = static_cast<double>(i) / degree;
          const double eta = static_cast<double>(j) / degree;
          coords_.push_back(c[0] + xi * (c[1] - c[0]) + eta * (c[2] - c[0]));
          bool on_boundary = false;
          if (nz == 1) {
            on_boundary = mesh.boundary_vertex()[static_cast<std::size_t>(key[0])];
          } else if (nz == 2) {
            on_boundary = is_boundary_edge.count({key[0], key[2]}) > 0;
          }
          boundary_.push_back(on_boundary);
        }
        elem_dofs_[t * static_cast<std::size_t>(npe) + static_cast<std::size_t>(local)] = it->second;
      }
    }
  }
}

}  // namespace ifem
