#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ifem/correction.hpp"
#include "ifem/interface_geometry.hpp"
#include "ifem/jump_calculus.hpp"
#include "ifem/lagrange.hpp"
#include "ifem/mesh.hpp"
#include "ifem/sparse_linalg.hpp"

namespace ifem {

/// Continuous degree-k Lagrange space on a mesh.
class FESpace {
 public:
  FESpace(const Mesh& mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const LagrangeBasis& basis() const { return *basis_; }
  int degree() const { return dofs_.degree(); }
  std::size_t size() const { return dofs_.num_dofs(); }
  const std::vector<AffineMap>& maps() const { return maps_; }

 private:
  const Mesh* mesh_;
  DofMap dofs_;
  const LagrangeBasis* basis_;
  std::vector<AffineMap> maps_;
};

struct DiscreteField {
  const FESpace* space = nullptr;
  std::vector<double> coeffs;

  double value(std::size_t element, const Vec2& x) const;
  Vec2 gradient(std::size_t element, const Vec2& x) const;
};

using SidedFunction = std::function<double(const Vec2&, Side)>;

/// Nodal interpolant taking minus-side values at nodes on the curve. Without
/// a curve every node uses the minus branch.
DiscreteField interpolate(const FESpace& space, const SidedFunction& u, const InterfaceCurve* curve);

/// Unconstrained stiffness matrix.
SparseMatrix assemble_stiffness_raw(const FESpace& space);
/// Boundary rows and columns replaced by identity.
SparseMatrix assemble_stiffness(const FESpace& space);
/// Symmetric elimination of Dirichlet rows: returns the constrained matrix
/// and modifies rhs so that boundary dofs equal `values`.
SparseMatrix apply_dirichlet(const SparseMatrix& raw, const std::vector<bool>& fixed, const std::vector<double>& values,
                             std::vector<double>& rhs);

/// Interface data for one Poisson problem.
struct PoissonProblem {
  const InterfaceCurve* curve = nullptr;  // null: no interface
  SidedFunction f;
  std::function<double(const Vec2&)> beta;  // sum of outward normal derivatives
  ScalarJumpData jumps;
  SidedFunction dirichlet;  // boundary values; null means zero
  bool corrections = true;
  int sliver_points = -1;  // default k + 2
};

/// Per-element corrections of a cut mesh. Holds pointers into `cuts`.
struct CorrectionSet {
  CutMesh cuts;
  std::vector<CorrectionFunction> w;  // parallel to cuts.cuts
};

/// Correction jumps c[l][i] = [D_eta^{k-l} u] at the projected Gauss points.
CorrectionJumps correction_jumps(const CutElement& cut, const ScalarJumpData& data, const InterfaceCurve& curve, int k);

/// Classifies the mesh and, when `with_corrections`, builds a correction on
/// every cut element.
std::unique_ptr<CorrectionSet> build_corrections(const Mesh& mesh, const InterfaceCurve& curve,
                                                 const ScalarJumpData& data, int k, bool with_corrections = true);

/// Load vector including interface and correction terms; boundary rows are
/// left unconstrained.
std::vector<double> assemble_rhs(const FESpace& space, const PoissonProblem& problem, const CorrectionSet* corr);

struct PoissonSolution {
  std::unique_ptr<FESpace> space;
  DiscreteField uh;
  std::unique_ptr<CorrectionSet> corrections;
  SolveStats stats;
  double residual = 0.0;
  double seconds_geometry = 0.0, seconds_assembly = 0.0, seconds_solve = 0.0;
};

PoissonSolution solve_poisson(const Mesh& mesh, int k, const PoissonProblem& problem, double tol = 1e-12);
// the solution refers to the mesh, which must outlive it
PoissonSolution solve_poisson(Mesh&&, int, const PoissonProblem&, double = 1e-12) = delete;

struct ErrorReport {
  double l2 = 0.0;
  double linf = 0.0;
  double h1 = 0.0;    // gradient L2
  double w1inf = 0.0; // gradient max
};

enum class ErrorMode { VsInterpolant, Corrected };

/// Errors of u_h against the exact solution. VsInterpolant measures
/// u_h - I_h u; Corrected measures u - (u_h + w) with side-aware quadrature.
ErrorReport compute_errors(const PoissonSolution& sol, const SidedFunction& u,
                           const std::function<Vec2(const Vec2&, Side)>& grad_u, const InterfaceCurve* curve,
                           ErrorMode mode);

/// Points used for max-norms on one element: nodes of a degree-2k lattice
/// plus the points of an exact quadrature rule.
std::vector<Vec2> sample_points_reference(int k);

}  // namespace ifem
