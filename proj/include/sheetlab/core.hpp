#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sheetlab {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }
// +pi/2 rotation
inline Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }
inline cplx to_cplx(const Vec2& a) { return {a.x, a.y}; }
inline Vec2 to_vec(const cplx& z) { return {z.real(), z.imag()}; }

// wrap into [-pi, pi)
inline double wrap_pi(double a) {
  double r = std::remainder(a, two_pi);
  if (r >= pi) r -= two_pi;
  return r;
}

// Which side of an oriented sheet a point lies on. Above = along +nu.
enum class Side { above, below, automatic };

// Error taxonomy; the CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// bad input / violated precondition
struct InvalidArgument : Error {
  using Error::Error;
};
// quadrature would return a wrong number (point too close, band under-resolved, ...)
struct QuadratureError : Error {
  using Error::Error;
};
// numerical breakdown, e.g. approach to the curvature singularity
struct NumericalAbort : Error {
  using Error::Error;
};
// config parse/validation errors
struct ConfigError : Error {
  using Error::Error;
};

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace sheetlab
