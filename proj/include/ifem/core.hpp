#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ifem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
/// Counterclockwise rotation by ninety degrees.
constexpr Vec2 rot90(const Vec2& a) { return {-a.y, a.x}; }

/// Symmetric 2x2 matrix, used for Hessians.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Which side of the interface a quantity belongs to. Minus is the region
/// where the level set is negative (enclosed region for closed curves).
enum class Side { Minus, Plus };

inline const char* to_string(Side s) { return s == Side::Minus ? "minus" : "plus"; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interface geometry could not be resolved on an element (tangency, multiple
/// crossings, failed projection).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Linear solver failed to meet its contract.
class SolverError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Problem data could not supply what an operation requested.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace ifem
