#pragma once

#include <cmath>

namespace ucp {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
/// Japanese bracket <z> = sqrt(1 + |z|^2).
inline double bracket(Point z) { return std::sqrt(1.0 + z.x * z.x + z.y * z.y); }

using Vec2 = Point;

/// Small dense 2x2 matrix [[a11, a12], [a21, a22]].
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }
  Mat2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  Mat2 operator*(const Mat2& b) const {
    return {a11 * b.a11 + a12 * b.a21, a11 * b.a12 + a12 * b.a22,
            a21 * b.a11 + a22 * b.a21, a21 * b.a12 + a22 * b.a22};
  }
  Mat2 scaled(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }
};

/// Eigen-decomposition of a symmetric matrix: A = R(angle) diag(d1, d2) R(angle)^T with d1 >= d2,
/// where the first column of R(angle) = (cos angle, sin angle) spans the d1 eigenspace.
struct SymEigen {
  double d1 = 1.0;
  double d2 = 1.0;
  double angle = 0.0;
};

inline SymEigen sym_eigen(const Mat2& a) {
  const double b = 0.5 * (a.a12 + a.a21);
  const double mean = 0.5 * (a.a11 + a.a22);
  const double rad = std::hypot(0.5 * (a.a11 - a.a22), b);
  return {mean + rad, mean - rad, 0.5 * std::atan2(2.0 * b, a.a11 - a.a22)};
}

/// Symmetric positive-definite square root.
inline Mat2 sqrt_spd(const Mat2& a) {
  const SymEigen e = sym_eigen(a);
  const double c = std::cos(e.angle), s = std::sin(e.angle);
  const double r1 = std::sqrt(e.d1), r2 = std::sqrt(e.d2);
  return {r1 * c * c + r2 * s * s, (r1 - r2) * c * s, (r1 - r2) * c * s, r1 * s * s + r2 * c * c};
}

}  // namespace ucp
