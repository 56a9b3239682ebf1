#pragma once

#include <array>
#include <cmath>

namespace ascent {

using Vec2 = std::array<double, 2>;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

inline bool finite(const Vec2& a) { return std::isfinite(a[0]) && std::isfinite(a[1]); }

}  // namespace ascent
