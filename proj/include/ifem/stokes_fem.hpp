#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "ifem/correction.hpp"
#include "ifem/jump_calculus.hpp"
#include "ifem/poisson_fem.hpp"

namespace ifem {

/// P2 velocity x P0 pressure with a scalar multiplier for the pressure mean.
/// Unknowns: velocity component c at node i is c * N + i, the pressure of
/// cell t is 2N + t, the multiplier is last.
class StokesSpace {
 public:
  explicit StokesSpace(const Mesh& mesh);

  const Mesh& mesh() const { return velocity_.mesh(); }
  const FESpace& velocity() const { return velocity_; }
  std::size_t num_velocity_nodes() const { return velocity_.size(); }
  std::size_t num_cells() const { return velocity_.mesh().num_triangles(); }
  std::size_t velocity_dof(int component, std::size_t node) const {
    return static_cast<std::size_t>(component) * velocity_.size() + node;
  }
  std::size_t pressure_dof(std::size_t cell) const { return 2 * velocity_.size() + cell; }
  std::size_t multiplier_dof() const { return 2 * velocity_.size() + num_cells(); }
  std::size_t size() const { return multiplier_dof() + 1; }
  /// Accuracy degree of the pair; corrections are built at this degree.
  int k() const { return 1; }

 private:
  FESpace velocity_;
};

using SidedVector = std::function<Vec2(const Vec2&, Side)>;

struct StokesProblem {
  const InterfaceCurve* curve = nullptr;
  SidedVector f;
  std::function<Vec2(const Vec2&)> beta;  // traction datum, sum convention
  StokesJumpData jumps;
  SidedVector dirichlet;  // null means zero
  bool corrections = true;
  /// Sign in front of the pressure correction term in the momentum rows:
  /// rhs -= sigma_p * int w^p div v.
  int sigma_p = -1;
  int sliver_points = -1;  // default 4
};

struct StokesCorrectionSet {
  CutMesh cuts;
  std::vector<std::array<CorrectionFunction, 2>> velocity;  // parallel to cuts.cuts
  std::vector<CorrectionFunction> pressure;
};

/// Correction jumps for both velocity components and the pressure at the
/// projected Gauss points of one cut element.
std::array<CorrectionJumps, 3> stokes_correction_jumps(const CutElement& cut, const StokesJumpData& data,
                                                       const InterfaceCurve& curve, int k);

std::unique_ptr<StokesCorrectionSet> build_stokes_corrections(const Mesh& mesh, const InterfaceCurve& curve,
                                                              const StokesJumpData& data, int k,
                                                              bool with_corrections = true);

/// Saddle matrix [A B^T 0; B 0 a; 0 a^T 0] without boundary conditions,
/// where B(t, (c, j)) = -int_t d_c phi_j and a holds the cell areas.
SparseMatrix assemble_stokes_matrix(const StokesSpace& space);

/// Extracts the velocity block A and the divergence block B.
SparseMatrix stokes_block_a(const StokesSpace& space, const SparseMatrix& K);
SparseMatrix stokes_block_b(const StokesSpace& space, const SparseMatrix& K);

std::vector<double> assemble_stokes_rhs(const StokesSpace& space, const StokesProblem& problem,
                                        const StokesCorrectionSet* corr);

struct StokesSolution {
  std::unique_ptr<StokesSpace> space;
  std::array<DiscreteField, 2> u;
  std::vector<double> pressure;  // per cell
  double multiplier = 0.0;
  std::unique_ptr<StokesCorrectionSet> corrections;
  SolveStats stats;
  double residual = 0.0;
  double seconds_geometry = 0.0, seconds_assembly = 0.0, seconds_solve = 0.0;

  double pressure_mean() const;
};

StokesSolution solve_stokes(const Mesh& mesh, const StokesProblem& problem, double tol = 1e-10);
// the solution refers to the mesh, which must outlive it
StokesSolution solve_stokes(Mesh&&, const StokesProblem&, double = 1e-10) = delete;

struct StokesErrorReport {
  double u_l2 = 0.0, u_linf = 0.0;
  double grad_l2 = 0.0, grad_linf = 0.0;
  double p_l2 = 0.0, p_linf = 0.0;
};

/// Velocity error against the componentwise P1 interpolant, pressure error
/// against side-aware cell means of p shifted to zero mean.
StokesErrorReport stokes_errors(const StokesSolution& sol, const SidedVector& u, const SidedFunction& p);

/// Side-aware cell means of p over every cell.
std::vector<double> pressure_cell_means(const StokesSpace& space, const SidedFunction& p, const CutMesh* cuts,
                                        int n = 6);

}  // namespace ifem
