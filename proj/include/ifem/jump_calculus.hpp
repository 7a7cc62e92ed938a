#pragma once

// Jumps of derivatives across the interface. Everything here uses the
// difference convention [v] = v+ - v-, with n pointing from the minus side to
// the plus side and t = rot90(n). The flux datum beta of a Poisson problem is
// the sum of outward normal derivatives, so [D_n u] = -beta.

#include <array>
#include <functional>
#include <vector>

#include "ifem/core.hpp"
#include "ifem/interface_geometry.hpp"
#include "ifem/taylor.hpp"

namespace ifem {

/// Entries [D_t^a D_n^b u] for a + b <= k at one interface point, with t and n
/// the frame at that point. Each entry also carries its arc-length series of
/// depth k - (a + b).
class JumpTable {
 public:
  JumpTable() = default;
  explicit JumpTable(int k);

  int degree() const { return k_; }
  double operator()(int a, int b) const { return jets_[idx(a, b)].value(); }
  const Series& jet(int a, int b) const { return jets_[idx(a, b)]; }
  Series& jet(int a, int b) { return jets_[idx(a, b)]; }

  Vec2 point, normal, tangent;
  double arc = 0.0;
  double curvature = 0.0;

 private:
  int k_ = 0;
  std::vector<Series> jets_;
  std::size_t idx(int a, int b) const;
};

/// Series along the curve needed by the recurrence for an equation
/// -Laplace(u) = g on each side.
struct JumpSeeds {
  Series value;                // [u], depth >= k
  Series normal;               // [D_n u], depth >= k - 1
  std::vector<Series> source;  // source[b] = [D_n^b g], depth >= k - 2 - b
};

/// Tangential steps with curvature correction for mixed entries, Laplacian
/// identity for pure normal entries.
JumpTable build_jump_table(const JumpSeeds& seeds, const Series& curvature, int k);

/// Providers of jump data as series in arc length about s. Missing value or
/// source providers mean zero.
struct ScalarJumpData {
  std::function<Series(double s, int depth)> value;
  std::function<Series(double s, int depth)> normal;
  std::function<Series(double s, int b, int depth)> source;
};

JumpTable build_jump_table(const ScalarJumpData& data, const InterfaceCurve& curve, double s, int k);

/// Poisson data: flux datum beta (sum of outward normal derivatives) and the
/// jumps [D_n^b f] of the right-hand side.
ScalarJumpData poisson_jump_data(std::function<Series(double s, int depth)> beta,
                                 std::function<Series(double s, int b, int depth)> source_jump);

/// [D_eta^l u] for eta = a n + b t.
double rotate_jumps_to_eta(const JumpTable& table, double a, double b, int l);

/// Unit normal and tangent of the curve as series in arc length about s.
struct FrameJets {
  std::array<Series, 2> position, tangent, normal;
};
FrameJets frame_jets(const InterfaceCurve& curve, double s, int depth);

/// Stokes data: traction datum beta (vector) in the same sum convention,
/// jumps of the body force and of its divergence.
struct StokesJumpData {
  std::function<std::array<Series, 2>(double s, int depth)> beta;
  std::function<std::array<Series, 2>(double s, int b, int depth)> force_jump;
  std::function<Series(double s, int b, int depth)> div_force_jump;
};

struct StokesJumps {
  std::array<JumpTable, 2> velocity;
  JumpTable pressure;
};

/// Velocity jumps per component and pressure jumps at X(s). The pressure
/// table is built to degree k_pressure.
StokesJumps stokes_jump_tables(const StokesJumpData& data, const InterfaceCurve& curve, double s, int k,
                               int k_pressure);

/// Series of a scalar function along the curve by central differences, for
/// data without analytic derivatives.
std::function<Series(double s, int depth)> series_along_curve(const InterfaceCurve& curve,
                                                              std::function<double(const Vec2&)> g,
                                                              double step = 1e-3);

}  // namespace ifem
