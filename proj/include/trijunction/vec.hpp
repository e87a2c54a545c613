#ifndef TRIJUNCTION_VEC_HPP
#define TRIJUNCTION_VEC_HPP

#include <cmath>

namespace trijunction {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Symmetric 2x2 matrix.
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
  double quad(const Vec2& v) const { return dot(v, apply(v)); }
  Mat2 operator+(const Mat2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
  Mat2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
  Mat2& operator+=(const Mat2& o) { xx += o.xx; xy += o.xy; yy += o.yy; return *this; }

  // Eigenvalues of a symmetric matrix, smaller first.
  void eigenvalues(double& lo, double& hi) const {
    const double tr = xx + yy;
    const double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
    lo = 0.5 * tr - d;
    hi = 0.5 * tr + d;
  }
  double opNorm() const {
    double lo, hi;
    eigenvalues(lo, hi);
    return std::max(std::abs(lo), std::abs(hi));
  }
};

// a (x) b + b (x) a, symmetric part used by Hessian assembly.
inline Mat2 symOuter(const Vec2& a, const Vec2& b) {
  return {2.0 * a.x * b.x, a.x * b.y + a.y * b.x, 2.0 * a.y * b.y};
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Map an angle to [0, 2*pi).
inline double wrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

// ccw angular distance from a to b, in [0, 2*pi).
inline double ccwGap(double a, double b) { return wrapAngle(b - a); }

}  // namespace trijunction

#endif
