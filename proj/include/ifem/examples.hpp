#pragma once

// Manufactured interface solutions with analytic data.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "ifem/core.hpp"
#include "ifem/interface_geometry.hpp"
#include "ifem/jump_calculus.hpp"

namespace ifem {

class PoissonExample {
 public:
  virtual ~PoissonExample() = default;
  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual const InterfaceCurve& curve() const = 0;
  virtual double u(const Vec2& x, Side side) const = 0;
  virtual Vec2 grad_u(const Vec2& x, Side side) const = 0;
  virtual double f(const Vec2& x, Side side) const = 0;
  /// Flux datum on the curve: sum of outward normal derivatives.
  virtual double beta(const Vec2& x) const = 0;
  /// Data providers built from beta and f only.
  virtual ScalarJumpData jump_data() const = 0;
  /// Jumps by direct differentiation of u in the fixed frame at X(s).
  virtual JumpTable exact_jumps(double s, int k) const = 0;
  /// -Laplace(u) at x by direct differentiation.
  virtual double minus_laplacian(const Vec2& x, Side side) const = 0;

  double u_at(const Vec2& x) const { return u(x, node_side(curve().phi(x))); }
};

class StokesExample {
 public:
  virtual ~StokesExample() = default;
  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual const InterfaceCurve& curve() const = 0;
  virtual Vec2 u(const Vec2& x, Side side) const = 0;
  /// rows: gradient of each velocity component
  virtual std::array<Vec2, 2> grad_u(const Vec2& x, Side side) const = 0;
  virtual double p(const Vec2& x, Side side) const = 0;
  virtual Vec2 f(const Vec2& x, Side side) const = 0;
  virtual double div_f(const Vec2& x, Side side) const = 0;
  /// Traction datum in the sum convention.
  virtual Vec2 beta(const Vec2& x) const = 0;
  virtual StokesJumpData jump_data() const = 0;
  virtual StokesJumps exact_jumps(double s, int k, int k_pressure) const = 0;
  /// (-Laplace(u) + grad p, div u, div f by differentiation of f) at x.
  virtual std::array<double, 4> residuals(const Vec2& x, Side side) const = 0;
};

/// Built-in Poisson examples: p1 (line), p2 (circle), pquad (piecewise
/// quadratic on the line, reproduced exactly for k >= 2).
std::unique_ptr<PoissonExample> make_poisson_example(const std::string& name);
/// Built-in Stokes examples: s1 (line), s2 (circle).
std::unique_ptr<StokesExample> make_stokes_example(const std::string& name);

struct ExampleCatalog {
  std::vector<std::string> poisson;
  std::vector<std::string> stokes;
};

/// Lists the built-in examples after checking each one's data against direct
/// differentiation of its exact solution. Throws DataError on a mismatch
/// larger than 1e-8.
ExampleCatalog register_builtin_examples();

/// Largest relative mismatch between data-driven and directly differentiated
/// quantities at `samples` interface points.
double validate_example(const PoissonExample& ex, int k, int samples);
double validate_example(const StokesExample& ex, int k, int samples);

}  // namespace ifem
