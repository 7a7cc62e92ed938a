#include "ifem/stokes_fem.hpp"

#include <chrono>
#include <cmath>

#include "ifem/quadrature.hpp"

namespace ifem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr int kVelocityNodes = 6;

Side uncut_side(const CutMesh* cuts, std::size_t t) {
  return cuts && cuts->classes[t] == ElementClass::Plus ? Side::Plus : Side::Minus;
}

}  // namespace

StokesSpace::StokesSpace(const Mesh& mesh) : velocity_(mesh, 2) {}

std::array<CorrectionJumps, 3> stokes_correction_jumps(const CutElement& cut, const StokesJumpData& data,
                                                       const InterfaceCurve& curve, int k) {
  std::array<CorrectionJumps, 3> c;
  for (auto& ci : c) ci.resize(static_cast<std::size_t>(k) + 1);
  for (int l = 0; l <= k; ++l) {
    for (int i = 0; i <= l; ++i) {
      const Vec2 x = cut.projection(l, i);
      const StokesJumps J = stokes_jump_tables(data, curve, curve.arc_coordinate(x), k - l, k - l);
      const double a = dot(cut.eta, J.pressure.normal), b = dot(cut.eta, J.pressure.tangent);
      for (int comp = 0; comp < 2; ++comp)
        c[static_cast<std::size_t>(comp)][static_cast<std::size_t>(l)].push_back(
            rotate_jumps_to_eta(J.velocity[static_cast<std::size_t>(comp)], a, b, k - l));
      c[2][static_cast<std::size_t>(l)].push_back(rotate_jumps_to_eta(J.pressure, a, b, k - l));
    }
  }
  return c;
}

std::unique_ptr<StokesCorrectionSet> build_stokes_corrections(const Mesh& mesh, const InterfaceCurve& curve,
                                                              const StokesJumpData& data, int k,
                                                              bool with_corrections) {
  auto set = std::make_unique<StokesCorrectionSet>();
  set->cuts = classify_elements(mesh, curve, k);
  if (!with_corrections) return set;
  set->velocity.reserve(set->cuts.cuts.size());
  set->pressure.reserve(set->cuts.cuts.size());
  for (const auto& cut : set->cuts.cuts) {
    const auto c = stokes_correction_jumps(cut, data, curve, k);
    set->velocity.push_back({build_correction(cut, c[0], k), build_correction(cut, c[1], k)});
    set->pressure.push_back(build_pressure_correction(cut, c[2], k));
  }
  return set;
}

SparseMatrix assemble_stokes_matrix(const StokesSpace& space) {
  const FESpace& V = space.velocity();
  const SparseMatrix A = assemble_stiffness_raw(V);
  TripletBuilder tb(space.size(), space.size());
  tb.reserve(2 * A.nonzeros() + 4 * kVelocityNodes * space.num_cells() + 2 * space.num_cells());
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t p = A.row_ptr()[i]; p < A.row_ptr()[i + 1]; ++p)
        tb.add(static_cast<int>(space.velocity_dof(c, i)),
               static_cast<int>(space.velocity_dof(c, static_cast<std::size_t>(A.col_idx()[p]))), A.values()[p]);
  }
  // gradients of P2 basis are linear, so the centroid value times the area is exact
  const auto& basis = V.basis();
  Vec2 g[kVelocityNodes];
  basis.eval_gradients(Vec2{1.0 / 3.0, 1.0 / 3.0}, g);
  const int mult = static_cast<int>(space.multiplier_dof());
  for (std::size_t t = 0; t < space.num_cells(); ++t) {
    const AffineMap& map = V.maps()[t];
    const double area = space.mesh().area(t);
    const int row = static_cast<int>(space.pressure_dof(t));
    const int* dofs = V.dofs().element_dofs(t);
    for (int j = 0; j < kVelocityNodes; ++j) {
      const Vec2 gj = map.gradient_to_physical(g[j]);
      for (int c = 0; c < 2; ++c) {
        const double b = -area * (c == 0 ? gj.x : gj.y);
        const int col = static_cast<int>(space.velocity_dof(c, static_cast<std::size_t>(dofs[j])));
        tb.add(row, col, b);
        tb.add(col, row, b);
      }
    }
    tb.add(row, mult, area);
    tb.add(mult, row, area);
  }
  return tb.build();
}

namespace {

SparseMatrix extract_block(const SparseMatrix& K, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  TripletBuilder tb(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t p = K.row_ptr()[i]; p < K.row_ptr()[i + 1]; ++p) {
      const auto j = static_cast<std::size_t>(K.col_idx()[p]);
      if (j >= c0 && j < c1) tb.add(static_cast<int>(i - r0), static_cast<int>(j - c0), K.values()[p]);
    }
  return tb.build();
}

}  // namespace

SparseMatrix stokes_block_a(const StokesSpace& space, const SparseMatrix& K) {
  const std::size_t nv = 2 * space.num_velocity_nodes();
  return extract_block(K, 0, nv, 0, nv);
}

SparseMatrix stokes_block_b(const StokesSpace& space, const SparseMatrix& K) {
  const std::size_t nv = 2 * space.num_velocity_nodes();
  return extract_block(K, nv, nv + space.num_cells(), 0, nv);
}

std::vector<double> assemble_stokes_rhs(const StokesSpace& space, const StokesProblem& problem,
                                        const StokesCorrectionSet* corr) {
  if (problem.corrections && problem.curve && (!corr || corr->velocity.size() != corr->cuts.cuts.size()))
    throw DataError("stokes rhs: corrections requested but not built for every cut element");
  const FESpace& V = space.velocity();
  const auto& basis = V.basis();
  const int load_degree = 6;
  const int n = problem.sliver_points > 0 ? problem.sliver_points : 4;
  const QuadratureRule ref = triangle_rule(load_degree);
  std::vector<std::array<double, kVelocityNodes>> ref_vals(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) basis.eval(ref.points[q], ref_vals[q].data());

  std::vector<double> b(space.size(), 0.0);
  const CutMesh* cuts = corr ? &corr->cuts : nullptr;
  double phi[kVelocityNodes];
  Vec2 grad[kVelocityNodes];
  for (std::size_t t = 0; t < space.num_cells(); ++t) {
    const AffineMap& map = V.maps()[t];
    const int* dofs = V.dofs().element_dofs(t);
    std::array<std::array<double, kVelocityNodes>, 2> be{};
    double bp = 0.0;
    const int ci = cuts ? cuts->cut_index[t] : -1;
    if (ci < 0) {
      const Side side = uncut_side(cuts, t);
      const double jac = std::abs(map.jacobian());
      for (std::size_t q = 0; q < ref.size(); ++q) {
        const Vec2 fw = problem.f(map.to_physical(ref.points[q]), side) * (ref.weights[q] * jac);
        for (int i = 0; i < kVelocityNodes; ++i) {
          be[0][static_cast<std::size_t>(i)] += fw.x * ref_vals[q][static_cast<std::size_t>(i)];
          be[1][static_cast<std::size_t>(i)] += fw.y * ref_vals[q][static_cast<std::size_t>(i)];
        }
      }
    } else {
      const auto idx = static_cast<std::size_t>(ci);
      const CutElement& cut = cuts->cuts[idx];
      const bool with_w = !corr->velocity.empty();
      for (Side side : {Side::Minus, Side::Plus}) {
        const QuadratureRule rule = cut_region_rule(cut, side, n, load_degree);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Vec2 x = rule.points[q];
          const double w = rule.weights[q];
          const Vec2 xi = map.to_reference(x);
          basis.eval(xi, phi);
          const Vec2 fw = problem.f(x, side) * w;
          for (int i = 0; i < kVelocityNodes; ++i) {
            be[0][static_cast<std::size_t>(i)] += fw.x * phi[i];
            be[1][static_cast<std::size_t>(i)] += fw.y * phi[i];
          }
          if (!with_w) continue;
          basis.eval_gradients(xi, grad);
          const Vec2 gw0 = corr->velocity[idx][0].gradient(x, side);
          const Vec2 gw1 = corr->velocity[idx][1].gradient(x, side);
          const double wp = corr->pressure[idx].value(x, side);
          for (int i = 0; i < kVelocityNodes; ++i) {
            const Vec2 g = map.gradient_to_physical(grad[i]);
            be[0][static_cast<std::size_t>(i)] -= w * (dot(gw0, g) + problem.sigma_p * wp * g.x);
            be[1][static_cast<std::size_t>(i)] -= w * (dot(gw1, g) + problem.sigma_p * wp * g.y);
          }
          bp += w * (gw0.x + gw1.y);
        }
      }
      if (problem.beta) {
        const QuadratureRule rule = interface_rule(cut, n);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          basis.eval(map.to_reference(rule.points[q]), phi);
          const Vec2 bw = problem.beta(rule.points[q]) * rule.weights[q];
          for (int i = 0; i < kVelocityNodes; ++i) {
            be[0][static_cast<std::size_t>(i)] += bw.x * phi[i];
            be[1][static_cast<std::size_t>(i)] += bw.y * phi[i];
          }
        }
      }
    }
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < kVelocityNodes; ++i)
        b[space.velocity_dof(c, static_cast<std::size_t>(dofs[i]))] += be[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
    b[space.pressure_dof(t)] = bp;
  }
  return b;
}

double StokesSolution::pressure_mean() const {
  double s = 0.0, area = 0.0;
  for (std::size_t t = 0; t < pressure.size(); ++t) {
    s += pressure[t] * space->mesh().area(t);
    area += space->mesh().area(t);
  }
  return s / area;
}

StokesSolution solve_stokes(const Mesh& mesh, const StokesProblem& problem, double tol) {
  if (problem.sigma_p != 1 && problem.sigma_p != -1) throw DataError("stokes: sigma_p must be +1 or -1");
  if (!problem.f) throw DataError("stokes: missing body force");
  StokesSolution sol;
  auto t0 = std::chrono::steady_clock::now();
  sol.space = std::make_unique<StokesSpace>(mesh);
  const StokesSpace& space = *sol.space;
  if (problem.curve)
    sol.corrections = build_stokes_corrections(mesh, *problem.curve, problem.jumps, space.k(), problem.corrections);
  sol.seconds_geometry = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const SparseMatrix raw = assemble_stokes_matrix(space);
  std::vector<double> b = assemble_stokes_rhs(space, problem, sol.corrections.get());
  const FESpace& V = space.velocity();
  const std::size_t N = V.size();
  std::vector<bool> fixed(space.size(), false);
  std::vector<double> values(space.size(), 0.0);
  const auto& xs = V.dofs().coordinates();
  for (std::size_t i = 0; i < N; ++i) {
    if (!V.dofs().is_boundary(i)) continue;
    fixed[space.velocity_dof(0, i)] = fixed[space.velocity_dof(1, i)] = true;
    if (problem.dirichlet) {
      const Side side = problem.curve ? node_side(problem.curve->phi(xs[i])) : Side::Minus;
      const Vec2 g = problem.dirichlet(xs[i], side);
      values[space.velocity_dof(0, i)] = g.x;
      values[space.velocity_dof(1, i)] = g.y;
    }
  }
  // degree-k corrections vanish only at vertices; boundary midpoints of cut
  // elements carry u - w^u
  if (sol.corrections && !sol.corrections->velocity.empty()) {
    const CutMesh& cuts = sol.corrections->cuts;
    std::vector<bool> done(N, false);
    for (std::size_t c = 0; c < cuts.cuts.size(); ++c) {
      const std::size_t t = cuts.cuts[c].element;
      const int* dofs = V.dofs().element_dofs(t);
      for (int j = 0; j < kVelocityNodes; ++j) {
        const auto node = static_cast<std::size_t>(dofs[j]);
        if (!V.dofs().is_boundary(node) || done[node]) continue;
        done[node] = true;
        const Side side = node_side(problem.curve->phi(xs[node]));
        for (int comp = 0; comp < 2; ++comp)
          values[space.velocity_dof(comp, node)] -= sol.corrections->velocity[c][static_cast<std::size_t>(comp)].value(xs[node], side);
      }
    }
  }
  const SparseMatrix K = apply_dirichlet(raw, fixed, values, b);
  sol.seconds_assembly = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const std::vector<double> x = solve_saddle_schur(K, 2 * N, b, tol, &sol.stats);
  sol.residual = sol.stats.relative_residual;
  for (int c = 0; c < 2; ++c) {
    auto& field = sol.u[static_cast<std::size_t>(c)];
    field.space = &V;
    field.coeffs.assign(x.begin() + static_cast<std::ptrdiff_t>(space.velocity_dof(c, 0)),
                        x.begin() + static_cast<std::ptrdiff_t>(space.velocity_dof(c, 0) + N));
  }
  sol.pressure.assign(x.begin() + static_cast<std::ptrdiff_t>(space.pressure_dof(0)),
                      x.begin() + static_cast<std::ptrdiff_t>(space.multiplier_dof()));
  sol.multiplier = x[space.multiplier_dof()];
  sol.seconds_solve = seconds_since(t0);
  return sol;
}

std::vector<double> pressure_cell_means(const StokesSpace& space, const SidedFunction& p, const CutMesh* cuts, int n) {
  const QuadratureRule ref = triangle_rule(std::min(2 * n - 1, 10));
  std::vector<double> means(space.num_cells(), 0.0);
  for (std::size_t t = 0; t < space.num_cells(); ++t) {
    const AffineMap& map = space.velocity().maps()[t];
    const int ci = cuts ? cuts->cut_index[t] : -1;
    double s = 0.0;
    if (ci < 0) {
      const Side side = uncut_side(cuts, t);
      const double jac = std::abs(map.jacobian());
      for (std::size_t q = 0; q < ref.size(); ++q) s += ref.weights[q] * jac * p(map.to_physical(ref.points[q]), side);
    } else {
      const CutElement& cut = cuts->cuts[static_cast<std::size_t>(ci)];
      for (Side side : {Side::Minus, Side::Plus})
        s += integrate_cut_region(cut, side, [&](const Vec2& x) { return p(x, side); }, n);
    }
    means[t] = s / space.mesh().area(t);
  }
  return means;
}

StokesErrorReport stokes_errors(const StokesSolution& sol, const SidedVector& u, const SidedFunction& p) {
  const StokesSpace& space = *sol.space;
  const Mesh& mesh = space.mesh();
  const CutMesh* cuts = sol.corrections ? &sol.corrections->cuts : nullptr;
  const InterfaceCurve* curve = cuts && !cuts->cuts.empty() ? cuts->cuts.front().curve : nullptr;
  StokesErrorReport r;

  // componentwise P1 interpolant, sides taken from the vertex level set
  std::array<double, 3> iu[2];
  const QuadratureRule rule = triangle_rule(4);
  const auto samples = sample_points_reference(2);
  const LagrangeBasis& p1 = lagrange_basis(1);
  double l2 = 0.0, h1 = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto corners = mesh.corners(t);
    const AffineMap& map = space.velocity().maps()[t];
    for (int v = 0; v < 3; ++v) {
      Side side = Side::Minus;
      if (curve) side = node_side(curve->phi(corners[static_cast<std::size_t>(v)]));
      else if (cuts) side = uncut_side(cuts, t);
      const Vec2 uv = u(corners[static_cast<std::size_t>(v)], side);
      iu[0][static_cast<std::size_t>(v)] = uv.x;
      iu[1][static_cast<std::size_t>(v)] = uv.y;
    }
    Vec2 g1[3];
    p1.eval_gradients(Vec2{0.0, 0.0}, g1);
    Vec2 gi[2];
    for (int c = 0; c < 2; ++c) {
      gi[c] = Vec2{};
      for (int v = 0; v < 3; ++v) gi[c] += iu[c][static_cast<std::size_t>(v)] * map.gradient_to_physical(g1[v]);
    }
    auto error_at = [&](const Vec2& xi, double& e2, double& g2) {
      const Vec2 x = map.to_physical(xi);
      double phi[3];
      p1.eval(xi, phi);
      e2 = g2 = 0.0;
      for (int c = 0; c < 2; ++c) {
        double ih = 0.0;
        for (int v = 0; v < 3; ++v) ih += iu[c][static_cast<std::size_t>(v)] * phi[v];
        const double e = sol.u[static_cast<std::size_t>(c)].value(t, x) - ih;
        const Vec2 g = sol.u[static_cast<std::size_t>(c)].gradient(t, x) - gi[c];
        e2 += e * e;
        g2 += dot(g, g);
      }
    };
    const double jac = std::abs(map.jacobian());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double e2, g2;
      error_at(rule.points[q], e2, g2);
      l2 += rule.weights[q] * jac * e2;
      h1 += rule.weights[q] * jac * g2;
    }
    for (const Vec2& xi : samples) {
      double e2, g2;
      error_at(xi, e2, g2);
      r.u_linf = std::max(r.u_linf, std::sqrt(e2));
      r.grad_linf = std::max(r.grad_linf, std::sqrt(g2));
    }
  }
  r.u_l2 = std::sqrt(l2);
  r.grad_l2 = std::sqrt(h1);

  const std::vector<double> jp = pressure_cell_means(space, p, cuts);
  double mean = 0.0, area = 0.0;
  for (std::size_t t = 0; t < jp.size(); ++t) {
    mean += jp[t] * mesh.area(t);
    area += mesh.area(t);
  }
  mean /= area;
  const double ph_mean = sol.pressure_mean();
  double pl2 = 0.0;
  for (std::size_t t = 0; t < jp.size(); ++t) {
    const double e = (sol.pressure[t] - ph_mean) - (jp[t] - mean);
    pl2 += mesh.area(t) * e * e;
    r.p_linf = std::max(r.p_linf, std::abs(e));
  }
  r.p_l2 = std::sqrt(pl2);
  return r;
}

}  // namespace ifem
