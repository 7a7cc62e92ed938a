#include <gtest/gtest.h>

#include <cmath>

#include "ifem/examples.hpp"
#include "ifem/quadrature.hpp"
#include "ifem/stokes_fem.hpp"

using namespace ifem;

namespace {

StokesProblem problem_for(const StokesExample& ex, bool corrections = true, int sigma_p = -1) {
  StokesProblem pr;
  pr.curve = &ex.curve();
  pr.f = [&ex](const Vec2& x, Side s) { return ex.f(x, s); };
  pr.beta = [&ex](const Vec2& x) { return ex.beta(x); };
  pr.jumps = ex.jump_data();
  pr.dirichlet = [&ex](const Vec2& x, Side s) { return ex.u(x, s); };
  pr.corrections = corrections;
  pr.sigma_p = sigma_p;
  return pr;
}

StokesErrorReport errors_for(const StokesExample& ex, const StokesSolution& sol) {
  return stokes_errors(sol, [&ex](const Vec2& x, Side s) { return ex.u(x, s); },
                       [&ex](const Vec2& x, Side s) { return ex.p(x, s); });
}

}  // namespace

TEST(StokesSpaceTest, Layout) {
  const Mesh m = build_structured(2);
  const StokesSpace S(m);
  EXPECT_EQ(S.num_velocity_nodes(), 25u);
  EXPECT_EQ(S.velocity_dof(1, 3), 28u);
  EXPECT_EQ(S.pressure_dof(0), 50u);
  EXPECT_EQ(S.multiplier_dof(), 58u);
  EXPECT_EQ(S.size(), 59u);
  EXPECT_EQ(S.k(), 1);
}

TEST(StokesMatrix, BlocksAreVectorStiffnessAndDivergence) {
  const Mesh m = build_perturbed(4, 0.2, 3);
  const StokesSpace S(m);
  const SparseMatrix K = assemble_stokes_matrix(S);
  EXPECT_TRUE(K.is_symmetric());
  const SparseMatrix A = stokes_block_a(S, K), B = stokes_block_b(S, K);
  const SparseMatrix L = assemble_stiffness_raw(S.velocity());
  const std::size_t N = S.num_velocity_nodes();
  ASSERT_EQ(A.rows(), 2 * N);
  ASSERT_EQ(B.rows(), S.num_cells());
  for (std::size_t i = 0; i < N; i += 7)
    for (std::size_t j = 0; j < N; ++j) {
      EXPECT_EQ(A.at(i, j), L.at(i, j));
      EXPECT_EQ(A.at(N + i, N + j), L.at(i, j));
      EXPECT_EQ(A.at(i, N + j), 0.0);
    }
  // B(t, v) = -int_t div v: the x-velocity field v = x has divergence 1
  std::vector<double> v(2 * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) v[i] = S.velocity().dofs().coordinates()[i].x;
  const auto Bv = B * v;
  for (std::size_t t = 0; t < S.num_cells(); ++t) EXPECT_NEAR(Bv[t], -m.area(t), 1e-14);
  // multiplier row holds the cell areas
  for (std::size_t t = 0; t < S.num_cells(); ++t) EXPECT_EQ(K.at(S.multiplier_dof(), S.pressure_dof(t)), m.area(t));
}

TEST(StokesMatrix, DivergenceCompatibility) {
  // sum over cells of int div v vanishes for v zero on the boundary
  const Mesh m = build_structured(5);
  const StokesSpace S(m);
  const SparseMatrix B = stokes_block_b(S, assemble_stokes_matrix(S));
  std::vector<double> ones(S.num_cells(), 1.0);
  std::vector<double> col(B.cols(), 0.0);
  for (std::size_t t = 0; t < B.rows(); ++t)
    for (std::size_t p = B.row_ptr()[t]; p < B.row_ptr()[t + 1]; ++p) col[static_cast<std::size_t>(B.col_idx()[p])] += B.values()[p];
  const std::size_t N = S.num_velocity_nodes();
  for (std::size_t i = 0; i < 2 * N; ++i)
    if (!S.velocity().dofs().is_boundary(i % N)) EXPECT_NEAR(col[i], 0.0, 1e-14);
}

TEST(StokesSolve, NoInterfaceQuadraticIsExact) {
  const Mesh m = build_perturbed(6, 0.2, 8);
  StokesProblem pr;
  pr.f = [](const Vec2&, Side) { return Vec2{-2.0, -2.0}; };
  pr.dirichlet = [](const Vec2& x, Side) { return Vec2{x.y * x.y, x.x * x.x}; };
  const StokesSolution sol = solve_stokes(m, pr);
  // nodal values are exact; the error norms measure against a P1 interpolant
  const auto& xs = sol.space->velocity().dofs().coordinates();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(sol.u[0].coeffs[i], xs[i].y * xs[i].y, 1e-11);
    EXPECT_NEAR(sol.u[1].coeffs[i], xs[i].x * xs[i].x, 1e-11);
  }
  const StokesErrorReport e = stokes_errors(sol, pr.dirichlet, [](const Vec2&, Side) { return 0.0; });
  EXPECT_LT(e.p_linf, 1e-8);
  EXPECT_NEAR(sol.pressure_mean(), 0.0, 1e-10);
}

TEST(StokesSolve, ZeroDataGivesZero) {
  const auto ex = make_stokes_example("s2");
  StokesProblem pr;
  pr.curve = &ex->curve();
  pr.f = [](const Vec2&, Side) { return Vec2{}; };
  pr.beta = [](const Vec2&) { return Vec2{}; };
  pr.jumps.beta = [](double, int d) { return std::array<Series, 2>{Series::constant(0, d), Series::constant(0, d)}; };
  const Mesh mesh = build_structured(6);
  const StokesSolution sol = solve_stokes(mesh, pr);
  for (int c = 0; c < 2; ++c)
    for (double v : sol.u[static_cast<std::size_t>(c)].coeffs) EXPECT_NEAR(v, 0.0, 1e-14);
  for (double p : sol.pressure) EXPECT_NEAR(p, 0.0, 1e-13);
}

TEST(StokesSolve, PressureMeanIsZero) {
  const auto ex = make_stokes_example("s1");
  const Mesh mesh = build_structured(8);
  const StokesSolution sol = solve_stokes(mesh, problem_for(*ex));
  EXPECT_NEAR(sol.pressure_mean(), 0.0, 1e-10);
  EXPECT_LE(sol.residual, 1e-10);
}

TEST(StokesSolve, ConsistentPressureSignIsRequired) {
  const auto ex = make_stokes_example("s1");
  const Mesh m16 = build_structured(16), m32 = build_structured(32);
  const double good16 = errors_for(*ex, solve_stokes(m16, problem_for(*ex, true, -1))).p_l2;
  const double good32 = errors_for(*ex, solve_stokes(m32, problem_for(*ex, true, -1))).p_l2;
  const double bad32 = errors_for(*ex, solve_stokes(m32, problem_for(*ex, true, +1))).p_l2;
  EXPECT_LT(good32, good16);
  EXPECT_GT(bad32, 2 * good32);
  StokesProblem pr = problem_for(*ex);
  pr.sigma_p = 0;
  EXPECT_THROW(solve_stokes(m16, pr), DataError);
}

TEST(StokesSolve, CorrectionsAreNeeded) {
  const auto ex = make_stokes_example("s1");
  const Mesh m = build_structured(16);
  const auto with = errors_for(*ex, solve_stokes(m, problem_for(*ex, true)));
  const auto without = errors_for(*ex, solve_stokes(m, problem_for(*ex, false)));
  // without corrections the gradient does not converge in the maximum norm
  EXPECT_GT(without.u_l2, 5 * with.u_l2);
  EXPECT_GT(without.grad_linf, 10 * with.grad_linf);
}

TEST(StokesSolve, MatrixUnaffectedByCorrections) {
  const auto ex = make_stokes_example("s2");
  const Mesh m = build_structured(8);
  const StokesSpace S(m);
  const SparseMatrix K = assemble_stokes_matrix(S);
  const auto with = build_stokes_corrections(m, ex->curve(), ex->jump_data(), 1, true);
  const auto rhs = assemble_stokes_rhs(S, problem_for(*ex, true), with.get());
  EXPECT_EQ(rhs.size(), S.size());
  EXPECT_TRUE(K == assemble_stokes_matrix(S));
  EXPECT_THROW(assemble_stokes_rhs(S, problem_for(*ex, true), nullptr), DataError);
}

TEST(StokesCorrections, PressureCorrectionsHaveZeroCellMean) {
  const auto ex = make_stokes_example("s2");
  const Mesh m = build_structured(8);
  const auto set = build_stokes_corrections(m, ex->curve(), ex->jump_data(), 1, true);
  ASSERT_EQ(set->pressure.size(), set->cuts.num_cut());
  ASSERT_GT(set->pressure.size(), 0u);
  for (std::size_t i = 0; i < set->pressure.size(); ++i) {
    const auto& cut = set->cuts.cuts[i];
    const auto& w = set->pressure[i];
    const double mean = integrate_cut_region(cut, Side::Minus, [&](const Vec2& x) { return w.value(x, Side::Minus); }, 16) +
                        integrate_cut_region(cut, Side::Plus, [&](const Vec2& x) { return w.value(x, Side::Plus); }, 16);
    EXPECT_NEAR(mean, 0.0, 1e-14);
  }
}

TEST(StokesCorrections, VelocityJumpsMatchExactSolution) {
  // [D_eta u] at the midpoint projection equals the exact jump
  const auto ex = make_stokes_example("s2");
  const Mesh m = build_structured(8);
  const auto set = build_stokes_corrections(m, ex->curve(), ex->jump_data(), 1, true);
  for (std::size_t i = 0; i < set->cuts.num_cut(); ++i) {
    const auto& cut = set->cuts.cuts[i];
    const Vec2 x = cut.projection(0, 0);
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
      auto comp = [&](const Vec2& y, Side s) { const Vec2 u = ex->u(y, s); return c == 0 ? u.x : u.y; };
      const double exact = (comp(x + h * cut.eta, Side::Plus) - comp(x - h * cut.eta, Side::Plus)) / (2 * h) -
                           (comp(x + h * cut.eta, Side::Minus) - comp(x - h * cut.eta, Side::Minus)) / (2 * h);
      const auto& w = set->velocity[i][static_cast<std::size_t>(c)];
      const double got = dot(w.gradient(x, Side::Plus) - w.gradient(x, Side::Minus), cut.eta);
      EXPECT_NEAR(got, exact, 1e-6);
    }
  }
}

TEST(PressureMeans, CellMeansOfConstantAndLinear) {
  const Mesh m = build_structured(4);
  const StokesSpace S(m);
  const auto means = pressure_cell_means(S, [](const Vec2& x, Side) { return 3.0 * x.x; }, nullptr);
  for (std::size_t t = 0; t < S.num_cells(); ++t) {
    const auto c = m.corners(t);
    EXPECT_NEAR(means[t], (c[0].x + c[1].x + c[2].x), 1e-14);
  }
}
