#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ifem/core.hpp"

namespace ifem {

using Triangle = std::array<int, 3>;

/// Conforming triangulation of a polygonal domain. Triangles are stored
/// counterclockwise. Immutable after construction.
class Mesh {
 public:
  Mesh() = default;
  /// Validates and reorients clockwise triangles. Throws ParseError on
  /// degenerate triangles or non-conforming edges.
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  std::array<Vec2, 3> corners(std::size_t t) const;
  double area(std::size_t t) const { return areas_[t]; }
  double diameter(std::size_t t) const { return diameters_[t]; }
  /// max element diameter
  double h() const { return h_; }

  /// Sorted vertex pairs lying on exactly one triangle.
  const std::vector<std::array<int, 2>>& boundary_edges() const { return boundary_edges_; }
  const std::vector<bool>& boundary_vertex() const { return boundary_vertex_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  std::vector<std::array<int, 2>> boundary_edges_;
  std::vector<bool> boundary_vertex_;
  double h_ = 0.0;
};

/// n x n cells on [-1,1]^2, each split along its northeast diagonal.
Mesh build_structured(int n);
/// Structured mesh with interior vertices moved by up to `amplitude` times
/// the grid spacing in each coordinate. Deterministic for a given seed.
Mesh build_perturbed(int n, double amplitude, unsigned seed);
/// Structured mesh under the smooth map x + a sin(pi x) sin(pi y) (same for y
/// with the roles swapped). The boundary is fixed; |a| < 1/(2 pi).
Mesh build_distorted(int n, double amplitude);

Mesh read_mesh(std::string_view text);
std::string write_mesh(const Mesh& mesh);
Mesh read_mesh_file(const std::string& path);

/// Degree-k continuous Lagrange numbering on a Mesh.
class DofMap {
 public:
  DofMap(const Mesh& mesh, int degree);

  int degree() const { return degree_; }
  int nodes_per_element() const { return (degree_ + 1) * (degree_ + 2) / 2; }
  std::size_t num_dofs() const { return coords_.size(); }
  const std::vector<Vec2>& coordinates() const { return coords_; }
  /// Global node ids of element t in local lattice order (see LagrangeBasis).
  const int* element_dofs(std::size_t t) const {
    return &elem_dofs_[t * static_cast<std::size_t>(nodes_per_element())];
  }
  bool is_boundary(std::size_t dof) const { return boundary_[dof]; }
  const std::vector<bool>& boundary_flags() const { return boundary_; }

 private:
  int degree_;
  std::vector<Vec2> coords_;
  std::vector<int> elem_dofs_;
  std::vector<bool> boundary_;
};

}  // namespace ifem
