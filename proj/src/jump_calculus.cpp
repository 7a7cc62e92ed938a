#include "ifem/jump_calculus.hpp"

#include <cmath>

namespace ifem {

JumpTable::JumpTable(int k) : k_(k), jets_(static_cast<std::size_t>((k + 1) * (k + 2) / 2)) {
  if (k < 0) throw std::invalid_argument("JumpTable: negative degree");
}

std::size_t JumpTable::idx(int a, int b) const {
  if (a < 0 || b < 0 || a + b > k_) throw std::out_of_range("JumpTable: entry beyond table degree");
  return static_cast<std::size_t>(Taylor2::index(a, b));
}

namespace {

Series need(const Series& s, int depth, const char* what) {
  if (s.depth() < depth)
    throw DataError(std::string("jump data: ") + what + " provided to depth " + std::to_string(s.depth()) + ", need " +
                    std::to_string(depth));
  return s.truncated(depth);
}

}  // namespace

JumpTable build_jump_table(const JumpSeeds& seeds, const Series& curvature, int k) {
  JumpTable t(k);
  t.jet(0, 0) = need(seeds.value, k, "value jump");
  if (k == 0) return t;
  if (curvature.depth() < k - 1) throw DataError("jump data: curvature series too shallow");
  t.jet(1, 0) = t.jet(0, 0).derivative_series();
  t.jet(0, 1) = need(seeds.normal, k - 1, "normal-derivative jump");
  for (int l = 2; l <= k; ++l) {
    const int depth = k - l;
    for (int a = l; a >= 1; --a) {
      const int b = l - a;
      Series s = t.jet(a - 1, b).derivative_series();
      if (a >= 2) s += static_cast<double>(a - 1) * (curvature * t.jet(a - 2, b + 1));
      if (b >= 1) s -= static_cast<double>(b) * (curvature * t.jet(a, b - 1));
      t.jet(a, b) = s.truncated(depth);
    }
    const auto src = static_cast<std::size_t>(l - 2);
    Series g = src < seeds.source.size() ? need(seeds.source[src], depth, "source jump") : Series::constant(0.0, depth);
    t.jet(0, l) = (-g - t.jet(2, l - 2)).truncated(depth);
  }
  return t;
}

JumpTable build_jump_table(const ScalarJumpData& data, const InterfaceCurve& curve, double s, int k) {
  JumpSeeds seeds;
  seeds.value = data.value ? data.value(s, k) : Series::constant(0.0, k);
  if (k >= 1) {
    if (!data.normal) throw DataError("jump data: missing normal-derivative provider");
    seeds.normal = data.normal(s, k - 1);
  }
  for (int b = 0; b <= k - 2; ++b)
    seeds.source.push_back(data.source ? data.source(s, b, k - 2 - b) : Series::constant(0.0, k - 2 - b));
  JumpTable t = build_jump_table(seeds, curve.curvature_jet(s, std::max(k - 1, 0)), k);
  t.arc = s;
  t.point = curve.point_at(s);
  t.normal = curve.normal(t.point);
  t.tangent = rot90(t.normal);
  t.curvature = curve.curvature(t.point);
  return t;
}

ScalarJumpData poisson_jump_data(std::function<Series(double, int)> beta,
                                 std::function<Series(double, int, int)> source_jump) {
  ScalarJumpData d;
  d.normal = [beta = std::move(beta)](double s, int depth) { return -beta(s, depth); };
  d.source = std::move(source_jump);
  return d;
}

double rotate_jumps_to_eta(const JumpTable& table, double a, double b, int l) {
  // (a D_n + b D_t)^l; j counts normal derivatives
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= l; ++j) {
    sum += binom * std::pow(a, j) * std::pow(b, l - j) * table(l - j, j);
    binom = binom * (l - j) / (j + 1);
  }
  return sum;
}

FrameJets frame_jets(const InterfaceCurve& curve, double s, int depth) {
  const auto pos = curve.position_jet(s, depth + 1);
  FrameJets f;
  for (int c = 0; c < 2; ++c) {
    const Series p = Series::from_taylor(pos[static_cast<std::size_t>(c)], depth + 1);
    f.position[static_cast<std::size_t>(c)] = p.truncated(depth);
    f.tangent[static_cast<std::size_t>(c)] = p.derivative_series();
  }
  f.normal = {f.tangent[1], -f.tangent[0]};
  return f;
}

StokesJumps stokes_jump_tables(const StokesJumpData& data, const InterfaceCurve& curve, double s, int k,
                               int k_pressure) {
  if (k >= 2 && k_pressure < k - 1) throw DataError("stokes jumps: pressure table degree too low for velocity sources");
  if (!data.beta) throw DataError("stokes jumps: missing traction provider");
  const int K = std::max(k, k_pressure);
  const FrameJets fr = frame_jets(curve, s, K);
  const auto beta = data.beta(s, K);
  const Series bn = beta[0] * fr.normal[0] + beta[1] * fr.normal[1];
  const Series bt = beta[0] * fr.tangent[0] + beta[1] * fr.tangent[1];
  const Series kappa = curve.curvature_jet(s, std::max(K - 1, 0));

  // Pressure solves -Laplace(p) = -div f on each side.
  JumpSeeds ps;
  ps.value = need(bn, k_pressure, "traction");
  if (k_pressure >= 1) {
    Series dn = bt.derivative_series().truncated(k_pressure - 1);
    if (data.force_jump) {
      const auto f = data.force_jump(s, 0, k_pressure - 1);
      dn += f[0] * fr.normal[0] + f[1] * fr.normal[1];
    }
    ps.normal = dn.truncated(k_pressure - 1);
  }
  for (int b = 0; b <= k_pressure - 2; ++b)
    ps.source.push_back(data.div_force_jump ? -data.div_force_jump(s, b, k_pressure - 2 - b)
                                            : Series::constant(0.0, k_pressure - 2 - b));

  StokesJumps out;
  out.pressure = build_jump_table(ps, kappa, k_pressure);

  // Each velocity component solves -Laplace(u_i) = f_i - d_i p.
  for (int i = 0; i < 2; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    JumpSeeds vs;
    vs.value = Series::constant(0.0, k);
    if (k >= 1) vs.normal = (-beta[ui] + bn * fr.normal[ui]).truncated(k - 1);
    for (int b = 0; b <= k - 2; ++b) {
      const int depth = k - 2 - b;
      Series g = fr.normal[ui] * out.pressure.jet(0, b + 1) + fr.tangent[ui] * out.pressure.jet(1, b);
      g = -g;
      if (data.force_jump) g += data.force_jump(s, b, depth)[ui];
      vs.source.push_back(g.truncated(depth));
    }
    out.velocity[ui] = build_jump_table(vs, kappa, k);
  }

  const Vec2 x = curve.point_at(s);
  for (JumpTable* t : {&out.velocity[0], &out.velocity[1], &out.pressure}) {
    t->arc = s;
    t->point = x;
    t->normal = curve.normal(x);
    t->tangent = rot90(t->normal);
    t->curvature = curve.curvature(x);
  }
  return out;
}

std::function<Series(double, int)> series_along_curve(const InterfaceCurve& curve, std::function<double(const Vec2&)> g,
                                                      double step) {
  return [&curve, g = std::move(g), step](double s, int depth) {
    if (depth == 0) return Series::constant(g(curve.point_at(s)), 0);
    return series_by_central_differences([&](double t) { return g(curve.point_at(t)); }, s, depth, step);
  };
}

}  // namespace ifem
