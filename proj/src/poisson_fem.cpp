#include "ifem/poisson_fem.hpp"

#include <chrono>
#include <cmath>

#include "ifem/quadrature.hpp"

namespace ifem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr int kMaxLocal = 28;

}  // namespace

FESpace::FESpace(const Mesh& mesh, int degree) : mesh_(&mesh), dofs_(mesh, degree), basis_(&lagrange_basis(degree)) {
  maps_.reserve(mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) maps_.emplace_back(mesh.corners(t));
}

double DiscreteField::value(std::size_t element, const Vec2& x) const {
  const auto& basis = space->basis();
  double phi[kMaxLocal];
  basis.eval(space->maps()[element].to_reference(x), phi);
  const int* dofs = space->dofs().element_dofs(element);
  double s = 0.0;
  for (int i = 0; i < basis.size(); ++i) s += coeffs[static_cast<std::size_t>(dofs[i])] * phi[i];
  return s;
}

Vec2 DiscreteField::gradient(std::size_t element, const Vec2& x) const {
  const auto& basis = space->basis();
  const AffineMap& map = space->maps()[element];
  Vec2 g[kMaxLocal];
  basis.eval_gradients(map.to_reference(x), g);
  const int* dofs = space->dofs().element_dofs(element);
  Vec2 s;
  for (int i = 0; i < basis.size(); ++i) s += coeffs[static_cast<std::size_t>(dofs[i])] * g[i];
  return map.gradient_to_physical(s);
}

DiscreteField interpolate(const FESpace& space, const SidedFunction& u, const InterfaceCurve* curve) {
  DiscreteField out{&space, std::vector<double>(space.size())};
  const auto& xs = space.dofs().coordinates();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Side side = curve ? node_side(curve->phi(xs[i])) : Side::Minus;
    out.coeffs[i] = u(xs[i], side);
  }
  return out;
}

SparseMatrix assemble_stiffness_raw(const FESpace& space) {
  const auto& basis = space.basis();
  const int nb = basis.size();
  const QuadratureRule rule = triangle_rule(std::max(2 * space.degree() - 2, 0));
  std::vector<std::vector<Vec2>> ref_grads(rule.size(), std::vector<Vec2>(static_cast<std::size_t>(nb)));
  for (std::size_t q = 0; q < rule.size(); ++q) basis.eval_gradients(rule.points[q], ref_grads[q].data());

  TripletBuilder tb(space.size(), space.size());
  tb.reserve(space.mesh().num_triangles() * static_cast<std::size_t>(nb * nb));
  std::vector<Vec2> g(static_cast<std::size_t>(nb));
  std::vector<double> Ae(static_cast<std::size_t>(nb * nb));
  for (std::size_t t = 0; t < space.mesh().num_triangles(); ++t) {
    const AffineMap& map = space.maps()[t];
    const double jac = std::abs(map.jacobian());
    std::fill(Ae.begin(), Ae.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      for (int i = 0; i < nb; ++i) g[static_cast<std::size_t>(i)] = map.gradient_to_physical(ref_grads[q][static_cast<std::size_t>(i)]);
      const double w = rule.weights[q] * jac;
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
          Ae[static_cast<std::size_t>(i * nb + j)] += w * dot(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
    }
    const int* dofs = space.dofs().element_dofs(t);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) tb.add(dofs[i], dofs[j], Ae[static_cast<std::size_t>(i * nb + j)]);
  }
  return tb.build();
}

SparseMatrix apply_dirichlet(const SparseMatrix& raw, const std::vector<bool>& fixed, const std::vector<double>& values,
                             std::vector<double>& rhs) {
  const std::size_t n = raw.rows();
  if (rhs.size() != n) rhs.assign(n, 0.0);
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  cols.reserve(raw.nonzeros());
  vals.reserve(raw.nonzeros());
  for (std::size_t i = 0; i < n; ++i) {
    if (i < fixed.size() && fixed[i]) {
      cols.push_back(static_cast<int>(i));
      vals.push_back(1.0);
      rhs[i] = values.empty() ? 0.0 : values[i];
    } else {
      for (std::size_t p = raw.row_ptr()[i]; p < raw.row_ptr()[i + 1]; ++p) {
        const auto j = static_cast<std::size_t>(raw.col_idx()[p]);
        if (j < fixed.size() && fixed[j]) {
          if (!values.empty()) rhs[i] -= raw.values()[p] * values[j];
          continue;
        }
        cols.push_back(static_cast<int>(j));
        vals.push_back(raw.values()[p]);
      }
    }
    row_ptr[i + 1] = cols.size();
  }
  return SparseMatrix(n, raw.cols(), std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrix assemble_stiffness(const FESpace& space) {
  std::vector<double> rhs;
  return apply_dirichlet(assemble_stiffness_raw(space), space.dofs().boundary_flags(), {}, rhs);
}

CorrectionJumps correction_jumps(const CutElement& cut, const ScalarJumpData& data, const InterfaceCurve& curve, int k) {
  CorrectionJumps c(static_cast<std::size_t>(k) + 1);
  for (int l = 0; l <= k; ++l) {
    for (int i = 0; i <= l; ++i) {
      const Vec2 x = cut.projection(l, i);
      const JumpTable table = build_jump_table(data, curve, curve.arc_coordinate(x), k - l);
      const double a = dot(cut.eta, table.normal), b = dot(cut.eta, table.tangent);
      c[static_cast<std::size_t>(l)].push_back(rotate_jumps_to_eta(table, a, b, k - l));
    }
  }
  return c;
}

std::unique_ptr<CorrectionSet> build_corrections(const Mesh& mesh, const InterfaceCurve& curve,
                                                 const ScalarJumpData& data, int k, bool with_corrections) {
  auto set = std::make_unique<CorrectionSet>();
  set->cuts = classify_elements(mesh, curve, k);
  if (with_corrections) {
    set->w.reserve(set->cuts.cuts.size());
    for (const auto& cut : set->cuts.cuts) set->w.push_back(build_correction(cut, correction_jumps(cut, data, curve, k), k));
  }
  return set;
}

std::vector<double> assemble_rhs(const FESpace& space, const PoissonProblem& problem, const CorrectionSet* corr) {
  const auto& basis = space.basis();
  const int nb = basis.size();
  const int p = space.degree();
  const int load_degree = std::min(2 * p + 2, 10);
  const int n = problem.sliver_points > 0 ? problem.sliver_points : p + 2;
  const QuadratureRule ref = triangle_rule(load_degree);
  std::vector<std::vector<double>> ref_vals(ref.size(), std::vector<double>(static_cast<std::size_t>(nb)));
  for (std::size_t q = 0; q < ref.size(); ++q) basis.eval(ref.points[q], ref_vals[q].data());

  std::vector<double> b(space.size(), 0.0);
  double phi[kMaxLocal];
  Vec2 grad[kMaxLocal];
  const Mesh& mesh = space.mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap& map = space.maps()[t];
    const int* dofs = space.dofs().element_dofs(t);
    double be[kMaxLocal] = {};
    const int ci = corr ? corr->cuts.cut_index[t] : -1;
    if (ci < 0) {
      Side side = Side::Minus;
      if (corr) side = corr->cuts.classes[t] == ElementClass::Plus ? Side::Plus : Side::Minus;
      const double jac = std::abs(map.jacobian());
      for (std::size_t q = 0; q < ref.size(); ++q) {
        const double fw = problem.f(map.to_physical(ref.points[q]), side) * ref.weights[q] * jac;
        for (int i = 0; i < nb; ++i) be[i] += fw * ref_vals[q][static_cast<std::size_t>(i)];
      }
    } else {
      const CutElement& cut = corr->cuts.cuts[static_cast<std::size_t>(ci)];
      const CorrectionFunction* w = corr->w.empty() ? nullptr : &corr->w[static_cast<std::size_t>(ci)];
      for (Side side : {Side::Minus, Side::Plus}) {
        const QuadratureRule rule = cut_region_rule(cut, side, n, load_degree);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Vec2 x = rule.points[q];
          const Vec2 xi = map.to_reference(x);
          basis.eval(xi, phi);
          const double fw = problem.f(x, side) * rule.weights[q];
          for (int i = 0; i < nb; ++i) be[i] += fw * phi[i];
          if (w) {
            basis.eval_gradients(xi, grad);
            const Vec2 gw = w->gradient(x, side) * rule.weights[q];
            for (int i = 0; i < nb; ++i) be[i] -= dot(gw, map.gradient_to_physical(grad[i]));
          }
        }
      }
      if (problem.beta) {
        const QuadratureRule rule = interface_rule(cut, n);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          basis.eval(map.to_reference(rule.points[q]), phi);
          const double bw = problem.beta(rule.points[q]) * rule.weights[q];
          for (int i = 0; i < nb; ++i) be[i] += bw * phi[i];
        }
      }
    }
    for (int i = 0; i < nb; ++i) b[static_cast<std::size_t>(dofs[i])] += be[i];
  }
  return b;
}

PoissonSolution solve_poisson(const Mesh& mesh, int k, const PoissonProblem& problem, double tol) {
  PoissonSolution sol;
  auto t0 = std::chrono::steady_clock::now();
  sol.space = std::make_unique<FESpace>(mesh, k);
  if (problem.curve) sol.corrections = build_corrections(mesh, *problem.curve, problem.jumps, k, problem.corrections);
  sol.seconds_geometry = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const FESpace& space = *sol.space;
  const SparseMatrix raw = assemble_stiffness_raw(space);
  std::vector<double> b = assemble_rhs(space, problem, sol.corrections.get());
  std::vector<double> values(space.size(), 0.0);
  const auto& flags = space.dofs().boundary_flags();
  if (problem.dirichlet) {
    const auto& xs = space.dofs().coordinates();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!flags[i]) continue;
      const Side side = problem.curve ? node_side(problem.curve->phi(xs[i])) : Side::Minus;
      values[i] = problem.dirichlet(xs[i], side);
    }
  }
  const SparseMatrix A = apply_dirichlet(raw, flags, values, b);
  sol.seconds_assembly = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  sol.uh = DiscreteField{sol.space.get(), solve_spd(A, b, tol, &sol.stats)};
  sol.residual = sol.stats.relative_residual;
  sol.seconds_solve = seconds_since(t0);
  return sol;
}

std::vector<Vec2> sample_points_reference(int k) {
  std::vector<Vec2> pts;
  const int m = 2 * k;
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m - j; ++i) pts.emplace_back(static_cast<double>(i) / m, static_cast<double>(j) / m);
  const QuadratureRule q = triangle_rule(std::min(2 * k + 2, 10));
  pts.insert(pts.end(), q.points.begin(), q.points.end());
  return pts;
}

ErrorReport compute_errors(const PoissonSolution& sol, const SidedFunction& u,
                           const std::function<Vec2(const Vec2&, Side)>& grad_u, const InterfaceCurve* curve,
                           ErrorMode mode) {
  const FESpace& space = *sol.space;
  const Mesh& mesh = space.mesh();
  const int p = space.degree();
  ErrorReport r;
  double l2 = 0.0, h1 = 0.0;

  if (mode == ErrorMode::VsInterpolant) {
    DiscreteField e = interpolate(space, u, curve);
    for (std::size_t i = 0; i < e.coeffs.size(); ++i) e.coeffs[i] = sol.uh.coeffs[i] - e.coeffs[i];
    const QuadratureRule rule = triangle_rule(std::min(2 * p, 10));
    const auto samples = sample_points_reference(p);
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const AffineMap& map = space.maps()[t];
      const double jac = std::abs(map.jacobian());
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 x = map.to_physical(rule.points[q]);
        const double v = e.value(t, x);
        const Vec2 g = e.gradient(t, x);
        l2 += rule.weights[q] * jac * v * v;
        h1 += rule.weights[q] * jac * dot(g, g);
      }
      for (const Vec2& xi : samples) {
        const Vec2 x = map.to_physical(xi);
        r.linf = std::max(r.linf, std::abs(e.value(t, x)));
        r.w1inf = std::max(r.w1inf, norm(e.gradient(t, x)));
      }
    }
  } else {
    const CorrectionSet* corr = sol.corrections.get();
    const int deg = std::min(2 * p + 4, 10);
    const QuadratureRule ref = triangle_rule(deg);
    const int n = p + 3;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const AffineMap& map = space.maps()[t];
      const int ci = corr ? corr->cuts.cut_index[t] : -1;
      auto accumulate = [&](const Vec2& x, double w, Side side, const CorrectionFunction* wf) {
        double v = u(x, side) - sol.uh.value(t, x);
        Vec2 g = grad_u(x, side) - sol.uh.gradient(t, x);
        if (wf) {
          v -= wf->value(x, side);
          g -= wf->gradient(x, side);
        }
        l2 += w * v * v;
        h1 += w * dot(g, g);
        r.linf = std::max(r.linf, std::abs(v));
        r.w1inf = std::max(r.w1inf, norm(g));
      };
      if (ci < 0) {
        Side side = Side::Minus;
        if (corr) side = corr->cuts.classes[t] == ElementClass::Plus ? Side::Plus : Side::Minus;
        const double jac = std::abs(map.jacobian());
        for (std::size_t q = 0; q < ref.size(); ++q) accumulate(map.to_physical(ref.points[q]), ref.weights[q] * jac, side, nullptr);
      } else {
        const CutElement& cut = corr->cuts.cuts[static_cast<std::size_t>(ci)];
        const CorrectionFunction* wf = corr->w.empty() ? nullptr : &corr->w[static_cast<std::size_t>(ci)];
        for (Side side : {Side::Minus, Side::Plus}) {
          const QuadratureRule rule = cut_region_rule(cut, side, n, deg);
          for (std::size_t q = 0; q < rule.size(); ++q) accumulate(rule.points[q], rule.weights[q], side, wf);
        }
      }
    }
  }
  r.l2 = std::sqrt(std::max(l2, 0.0));
  r.h1 = std::sqrt(std::max(h1, 0.0));
  return r;
}

}  // namespace ifem
