#pragma once

#include <cmath>
#include <complex>

namespace slitflow {

using Complex = std::complex<double>;

/// Point or vector in the plane, in k*r units unless stated otherwise.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2 &operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2 &operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Unsigned angle between two non-zero vectors, robust near 0 and pi.
inline double angle_between(Vec2 a, Vec2 b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

/// Complex 2-vector, e.g. the gradient of a complex field.
struct CVec2 {
  Complex x;
  Complex y;

  friend CVec2 operator+(const CVec2 &a, const CVec2 &b) { return {a.x + b.x, a.y + b.y}; }
  friend CVec2 operator*(Complex s, const CVec2 &a) { return {s * a.x, s * a.y}; }
  friend CVec2 operator*(double s, const CVec2 &a) { return {s * a.x, s * a.y}; }
};

}  // namespace slitflow
