#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vfindex/geometry.hpp"

namespace vfindex {

/// Oriented polyline. Closed curves repeat no vertex: the closing segment
/// runs from the last vertex back to the first.
struct Curve {
    std::vector<Vec2> vertices;
    bool closed = true;

    std::size_t segment_count() const {
        if (vertices.size() < 2) return 0;
        return closed ? vertices.size() : vertices.size() - 1;
    }
    Vec2 segment_start(std::size_t k) const { return vertices[k]; }
    Vec2 segment_end(std::size_t k) const { return vertices[(k + 1) % vertices.size()]; }

    double signed_area() const {
        if (!closed || vertices.size() < 3) return 0.0;
        double a = 0.0;
        for (std::size_t k = 0; k < vertices.size(); ++k) a += cross(segment_start(k), segment_end(k));
        return 0.5 * a;
    }

    /// +1 counter-clockwise, -1 clockwise, 0 for open or degenerate curves.
    int orientation() const {
        const double a = signed_area();
        return (a > 0.0) - (a < 0.0);
    }

    double length() const {
        double l = 0.0;
        for (std::size_t k = 0; k < segment_count(); ++k) l += distance(segment_start(k), segment_end(k));
        return l;
    }

    Curve reversed() const {
        Curve c{{vertices.rbegin(), vertices.rend()}, closed};
        return c;
    }

    /// Throws std::invalid_argument unless consecutive vertices are distinct,
    /// closed curves have at least three vertices and no two non-adjacent
    /// segments meet.
    void validate() const {
        if (closed && vertices.size() < 3) throw std::invalid_argument("closed curve needs at least 3 vertices");
        if (!closed && vertices.size() < 2) throw std::invalid_argument("open curve needs at least 2 vertices");
        const std::size_t n = segment_count();
        for (std::size_t k = 0; k < n; ++k)
            if (segment_start(k) == segment_end(k)) throw std::invalid_argument("repeated consecutive vertex");
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const bool adjacent = b == a + 1 || (closed && a == 0 && b == n - 1);
                if (adjacent) continue;
                if (segments_intersect(segment_start(a), segment_end(a), segment_start(b), segment_end(b)))
                    throw std::invalid_argument("curve self-intersects");
            }
        }
    }

    double distance_to(Vec2 p) const {
        double best = INFINITY;
        for (std::size_t k = 0; k < segment_count(); ++k)
            best = std::min(best, point_segment_distance(p, segment_start(k), segment_end(k)));
        if (vertices.size() == 1) best = vfindex::distance(p, vertices[0]);
        return best;
    }

    static Curve circle(Vec2 center, double radius, int n = 128, bool ccw = true) {
        Curve c;
        c.vertices.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const double t = kTwoPi * k / n * (ccw ? 1.0 : -1.0);
            c.vertices.push_back(center + radius * Vec2{std::cos(t), std::sin(t)});
        }
        return c;
    }

    static Curve rectangle(Vec2 lo, Vec2 hi, bool ccw = true) {
        Curve c{{lo, {hi.x, lo.y}, hi, {lo.x, hi.y}}, true};
        return ccw ? c : c.reversed();
    }
};

/// Winding number of a closed polyline about a point (crossing rule).
inline int winding_about(const Curve& c, Vec2 p) {
    int w = 0;
    for (std::size_t k = 0; k < c.segment_count(); ++k) {
        const Vec2 a = c.segment_start(k), b = c.segment_end(k);
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0.0) ++w;
        } else if (b.y <= p.y && cross(b - a, p - a) < 0.0) {
            --w;
        }
    }
    return w;
}

/// Planar region described by its bounding contours: outer contours run
/// counter-clockwise, hole contours clockwise.
struct Region {
    std::vector<Curve> contours;

    static Region disk(Vec2 center, double radius, int n = 64) { return {{Curve::circle(center, radius, n)}}; }
    static Region annulus(Vec2 center, double r_in, double r_out, int n = 96) {
        return {{Curve::circle(center, r_out, n), Curve::circle(center, r_in, n, false)}};
    }
    static Region rect(Vec2 lo, Vec2 hi) { return {{Curve::rectangle(lo, hi)}}; }

    /// Disjoint union; the caller guarantees the parts do not overlap.
    static Region united(const std::vector<Region>& parts) {
        Region r;
        for (const auto& p : parts) r.contours.insert(r.contours.end(), p.contours.begin(), p.contours.end());
        return r;
    }

    bool encloses(Vec2 p) const {
        int w = 0;
        for (const auto& c : contours) w += winding_about(c, p);
        return w > 0;
    }

    std::size_t vertex_count() const {
        std::size_t n = 0;
        for (const auto& c : contours) n += c.vertices.size();
        return n;
    }
};

}  // namespace vfindex
