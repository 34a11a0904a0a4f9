#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace vfindex {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

    friend std::ostream& operator<<(std::ostream& os, Vec2 v) {
        return os << '(' << v.x << ", " << v.y << ')';
    }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// Scalar 2-D cross product a.x*b.y - a.y*b.x (the wedge of two vectors).
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Signed angle in (-pi, pi] turning a into b.
inline double signed_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

struct Mat2 {
    // row-major: [a b; c d]
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr double det() const { return a * d - b * c; }
    constexpr double trace() const { return a + d; }

    friend constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
        return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
    }
    friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend constexpr Mat2 operator+(const Mat2& m, const Mat2& n) {
        return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
    }
    friend constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
        return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& m) {
        return {s * m.a, s * m.b, s * m.c, s * m.d};
    }
    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

/// Eigenvalues of a real 2x2 matrix as (re, im) pairs.
struct Eigen2 {
    double re1, im1, re2, im2;
};

inline Eigen2 eigenvalues(const Mat2& m) {
    const double tr = m.trace();
    const double disc = tr * tr / 4.0 - m.det();
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {tr / 2.0 + s, 0.0, tr / 2.0 - s, 0.0};
    }
    const double s = std::sqrt(-disc);
    return {tr / 2.0, s, tr / 2.0, -s};
}

inline bool solve(const Mat2& m, Vec2 rhs, Vec2& out) {
    const double det = m.det();
    const double scale = std::max(m.frobenius() * m.frobenius(), 1e-300);
    if (std::abs(det) <= 1e-14 * scale) return false;
    out = {(m.d * rhs.x - m.b * rhs.y) / det, (-m.c * rhs.x + m.a * rhs.y) / det};
    return true;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, Vec2* closest = nullptr) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q = a + t * ab;
    if (closest) *closest = q;
    return distance(p, q);
}

/// Proper or touching intersection of closed segments [a,b] and [c,d].
inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        const double v = cross(q - p, r - p);
        return (v > 0.0) - (v < 0.0);
    };
    auto on_seg = [](Vec2 p, Vec2 q, Vec2 r) {
        return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
               std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_seg(a, c, b)) return true;
    if (o2 == 0 && on_seg(a, d, b)) return true;
    if (o3 == 0 && on_seg(c, a, d)) return true;
    if (o4 == 0 && on_seg(c, b, d)) return true;
    return false;
}

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Box {
    Vec2 lo;
    Vec2 hi;
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double extent() const { return std::max(width(), height()); }
};

}  // namespace vfindex
