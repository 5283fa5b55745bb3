#pragma once

#include <cmath>

namespace scsip {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Signed area, positive for counterclockwise vertices.
inline constexpr double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct SymTensor {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    constexpr Point apply(Point v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

} // namespace scsip
