#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfindex/curve.hpp"
#include "vfindex/grid.hpp"

namespace vfindex {

/// Boundary-proximity tolerance shared by every surface query.
inline constexpr double kBoundaryTol = 1e-9;

class SurfaceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Compact planar surface with boundary. Immutable after construction.
class Surface {
public:
    enum class Kind { Disk, HalfplaneWindow, Annulus, PolygonWithHoles };

    static Surface disk(Vec2 center, double radius) {
        if (!(radius > 0.0)) throw SurfaceError("disk radius must be positive");
        Surface s(Kind::Disk);
        s.center_ = center;
        s.r_out_ = radius;
        s.boundary_ = {Curve::circle(center, radius, 256)};
        s.box_ = {center - Vec2{radius, radius}, center + Vec2{radius, radius}};
        s.finish();
        return s;
    }

    /// The rectangle [x0,x1] x [y0,y1] clipped to the closed half-plane y >= 0.
    static Surface halfplane_window(double x0, double x1, double y0, double y1) {
        y0 = std::max(y0, 0.0);
        if (!(x1 > x0) || !(y1 > y0)) throw SurfaceError("empty half-plane window");
        Surface s(Kind::HalfplaneWindow);
        s.box_ = {{x0, y0}, {x1, y1}};
        s.loops_ = {Curve::rectangle(s.box_.lo, s.box_.hi)};
        s.boundary_ = s.loops_;
        s.finish();
        return s;
    }

    static Surface annulus(Vec2 center, double r_inner, double r_outer) {
        if (!(r_inner > 0.0) || !(r_outer > r_inner)) throw SurfaceError("annulus needs 0 < r_inner < r_outer");
        Surface s(Kind::Annulus);
        s.center_ = center;
        s.r_in_ = r_inner;
        s.r_out_ = r_outer;
        s.boundary_ = {Curve::circle(center, r_outer, 256), Curve::circle(center, r_inner, 256, false)};
        s.box_ = {center - Vec2{r_outer, r_outer}, center + Vec2{r_outer, r_outer}};
        s.finish();
        return s;
    }

    /// Polygon with polygonal holes; orientations are normalised to an
    /// anticlockwise outer loop and clockwise holes.
    static Surface polygon(std::vector<Vec2> outer, std::vector<std::vector<Vec2>> holes = {}) {
        Surface s(Kind::PolygonWithHoles);
        Curve o{std::move(outer), true};
        checked(o);
        if (o.orientation() < 0) o = o.reversed();
        s.loops_.push_back(o);
        for (auto& h : holes) {
            Curve c{std::move(h), true};
            checked(c);
            if (c.orientation() > 0) c = c.reversed();
            for (Vec2 v : c.vertices)
                if (winding_about(o, v) == 0) throw SurfaceError("hole vertex outside the outer boundary");
            s.loops_.push_back(std::move(c));
        }
        for (std::size_t a = 0; a < s.loops_.size(); ++a)
            for (std::size_t b = a + 1; b < s.loops_.size(); ++b)
                if (loops_meet(s.loops_[a], s.loops_[b])) throw SurfaceError("boundary curves intersect");
        s.boundary_ = s.loops_;
        Box box{o.vertices.front(), o.vertices.front()};
        for (Vec2 v : o.vertices) {
            box.lo = {std::min(box.lo.x, v.x), std::min(box.lo.y, v.y)};
            box.hi = {std::max(box.hi.x, v.x), std::max(box.hi.y, v.y)};
        }
        s.box_ = box;
        s.finish();
        return s;
    }

    static Surface rectangle(Vec2 lo, Vec2 hi) {
        return polygon({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
    }

    Kind kind() const { return kind_; }
    std::string kind_name() const {
        switch (kind_) {
            case Kind::Disk: return "disk";
            case Kind::HalfplaneWindow: return "halfplane_window";
            case Kind::Annulus: return "annulus";
            case Kind::PolygonWithHoles: return "polygon_with_holes";
        }
        return {};
    }

    const std::vector<Curve>& boundary() const { return boundary_; }
    const Box& bounding_box() const { return box_; }
    Vec2 center() const { return center_; }
    double inner_radius() const { return r_in_; }
    double outer_radius() const { return r_out_; }

    double retraction_margin() const { return margin_; }
    Surface with_margin(double m) const {
        Surface s = *this;
        s.margin_ = m;
        return s;
    }

    int boundary_components() const { return static_cast<int>(boundary_.size()); }

    int euler_characteristic() const {
        switch (kind_) {
            case Kind::Disk:
            case Kind::HalfplaneWindow: return 1;
            case Kind::Annulus: return 0;
            case Kind::PolygonWithHoles: return 1 - static_cast<int>(loops_.size() - 1);
        }
        return 0;
    }

    /// Closed-region membership, boundary included up to kBoundaryTol.
    bool contains(Vec2 p) const { return distance(p) <= kBoundaryTol; }

    /// Euclidean distance from p to the surface (0 inside).
    double distance(Vec2 p) const {
        switch (kind_) {
            case Kind::Disk: return std::max(0.0, vfindex::distance(p, center_) - r_out_);
            case Kind::Annulus: {
                const double r = vfindex::distance(p, center_);
                return std::max({0.0, r - r_out_, r_in_ - r});
            }
            case Kind::HalfplaneWindow: return vfindex::distance(p, clamp_box(p));
            case Kind::PolygonWithHoles:
                return inside_polygon(p) ? 0.0 : polygon_boundary_distance(p, nullptr, nullptr, nullptr);
        }
        return 0.0;
    }

    double boundary_distance(Vec2 p) const {
        switch (kind_) {
            case Kind::Disk: return std::abs(vfindex::distance(p, center_) - r_out_);
            case Kind::Annulus: {
                const double r = vfindex::distance(p, center_);
                return std::min(std::abs(r - r_out_), std::abs(r - r_in_));
            }
            default: return polygon_boundary_distance(p, nullptr, nullptr, nullptr);
        }
    }

    /// Nearest point of S; no margin check.
    Vec2 project(Vec2 p) const {
        switch (kind_) {
            case Kind::Disk: {
                const Vec2 d = p - center_;
                const double r = norm(d);
                return r <= r_out_ ? p : center_ + (r_out_ / r) * d;
            }
            case Kind::Annulus: {
                const Vec2 d = p - center_;
                const double r = norm(d);
                if (r >= r_in_ && r <= r_out_) return p;
                if (r == 0.0) return center_ + Vec2{r_in_, 0.0};
                return center_ + (std::clamp(r, r_in_, r_out_) / r) * d;
            }
            case Kind::HalfplaneWindow: return clamp_box(p);
            case Kind::PolygonWithHoles: {
                if (inside_polygon(p)) return p;
                Vec2 q;
                polygon_boundary_distance(p, &q, nullptr, nullptr);
                return q;
            }
        }
        return p;
    }

    /// Retraction of the margin neighbourhood onto S: identity on S, nearest
    /// point projection outside.
    Vec2 retract(Vec2 p) const {
        if (contains(p)) return p;
        const double d = distance(p);
        if (d > margin_) throw SurfaceError("point lies outside the retraction margin");
        return project(p);
    }

    /// Unit inner normal at the boundary point nearest to p. At a polygon
    /// vertex the normalised sum of the two edge normals is returned.
    Vec2 inner_normal(Vec2 p) const {
        switch (kind_) {
            case Kind::Disk: {
                const Vec2 d = center_ - p;
                const double r = norm(d);
                return r > 0.0 ? d / r : Vec2{1.0, 0.0};
            }
            case Kind::Annulus: {
                const Vec2 d = p - center_;
                const double r = norm(d);
                const Vec2 u = r > 0.0 ? d / r : Vec2{1.0, 0.0};
                return std::abs(r - r_out_) <= std::abs(r - r_in_) ? -u : u;
            }
            default: {
                std::size_t loop = 0, seg = 0;
                polygon_boundary_distance(p, nullptr, &loop, &seg);
                const Curve& c = loops_[loop];
                const Vec2 a = c.segment_start(seg), b = c.segment_end(seg);
                Vec2 n = perp(b - a) / norm(b - a);
                const double ta = vfindex::distance(p, a), tb = vfindex::distance(p, b);
                if (std::min(ta, tb) <= kBoundaryTol) {
                    const std::size_t m = c.vertices.size();
                    const std::size_t other = ta <= tb ? (seg + m - 1) % m : (seg + 1) % m;
                    const Vec2 oa = c.segment_start(other), ob = c.segment_end(other);
                    n = n + perp(ob - oa) / norm(ob - oa);
                    n = n / norm(n);
                }
                return n;
            }
        }
    }

    /// Whether v is tangent at p to a curve staying in S. Smooth boundary
    /// points use v.n_in >= 0; convex corners the intersection and reflex
    /// corners the union of the two edge half-planes.
    bool inward_cone_test(Vec2 p, Vec2 v) const {
        if (boundary_distance(p) > kBoundaryTol) throw SurfaceError("point is not on the boundary");
        const double vn = norm(v);
        if (vn == 0.0) return true;
        const double eps = 1e-12 * vn;
        if (kind_ == Kind::Disk || kind_ == Kind::Annulus) return dot(v, inner_normal(p)) >= -eps;

        std::vector<Vec2> half_planes;  // inner normals of edges through p
        bool reflex = false;
        for (const Curve& c : loops_) {
            const std::size_t m = c.vertices.size();
            for (std::size_t k = 0; k < m; ++k) {
                const Vec2 a = c.segment_start(k), b = c.segment_end(k);
                if (vfindex::distance(p, b) <= kBoundaryTol) {
                    const Vec2 d_in = b - a, d_out = c.segment_end((k + 1) % m) - b;
                    half_planes = {perp(d_in) / norm(d_in), perp(d_out) / norm(d_out)};
                    reflex = cross(d_in, d_out) < 0.0;
                    goto decided;
                }
            }
        }
        for (const Curve& c : loops_) {
            for (std::size_t k = 0; k < c.segment_count(); ++k) {
                const Vec2 a = c.segment_start(k), b = c.segment_end(k);
                if (point_segment_distance(p, a, b) <= kBoundaryTol) {
                    half_planes = {perp(b - a) / norm(b - a)};
                    goto decided;
                }
            }
        }
    decided:
        if (half_planes.size() == 1) return dot(v, half_planes[0]) >= -eps;
        const bool in0 = dot(v, half_planes[0]) >= -eps;
        const bool in1 = dot(v, half_planes[1]) >= -eps;
        return reflex ? (in0 || in1) : (in0 && in1);
    }

    /// Evenly spaced points on every boundary component.
    std::vector<Vec2> boundary_samples(int per_component) const {
        std::vector<Vec2> out;
        if (kind_ == Kind::Disk || kind_ == Kind::Annulus) {
            for (int k = 0; k < per_component; ++k) {
                const double t = kTwoPi * k / per_component;
                const Vec2 u{std::cos(t), std::sin(t)};
                out.push_back(center_ + r_out_ * u);
                if (kind_ == Kind::Annulus) out.push_back(center_ + r_in_ * u);
            }
            return out;
        }
        for (const Curve& c : loops_) {
            const double len = c.length();
            for (int k = 0; k < per_component; ++k) {
                double s = len * k / per_component;
                for (std::size_t e = 0; e < c.segment_count(); ++e) {
                    const double l = vfindex::distance(c.segment_start(e), c.segment_end(e));
                    if (s <= l) {
                        out.push_back(c.segment_start(e) + (s / l) * (c.segment_end(e) - c.segment_start(e)));
                        break;
                    }
                    s -= l;
                }
            }
        }
        return out;
    }

    /// Planar contours lying just outside S (offset ~delta) and enclosing it;
    /// with the retraction they play the role of the whole surface.
    Region enclosing_region(double delta) const {
        switch (kind_) {
            case Kind::Disk: return Region::disk(center_, r_out_ + delta, 256);
            case Kind::Annulus: {
                const double d_in = std::min(delta, 0.5 * r_in_);
                return Region::annulus(center_, r_in_ - d_in, r_out_ + delta, 256);
            }
            case Kind::HalfplaneWindow: return Region::rect(box_.lo - Vec2{delta, delta}, box_.hi + Vec2{delta, delta});
            case Kind::PolygonWithHoles: {
                const Grid g = Grid::covering(box_, 256, static_cast<int>(std::ceil(2.0 * delta / (box_.extent() / 256))) + 2);
                const double d = std::max(delta, 2.0 * g.h);
                CellMask mask(g);
                for (std::size_t k = 0; k < g.size(); ++k) {
                    const Cell c = g.cell_at(k);
                    if (distance(g.center(c)) <= d) mask.set(c);
                }
                return {mask.boundary_loops()};
            }
        }
        return {};
    }

private:
    explicit Surface(Kind k) : kind_(k) {}

    Kind kind_;
    Vec2 center_;
    double r_in_ = 0.0;
    double r_out_ = 0.0;
    std::vector<Curve> loops_;  // polygonal kinds: outer first, then holes
    std::vector<Curve> boundary_;
    Box box_;
    double margin_ = 0.0;

    void finish() { margin_ = 0.5 * box_.extent(); }

    Vec2 clamp_box(Vec2 p) const {
        return {std::clamp(p.x, box_.lo.x, box_.hi.x), std::clamp(p.y, box_.lo.y, box_.hi.y)};
    }

    bool inside_polygon(Vec2 p) const {
        if (polygon_boundary_distance(p, nullptr, nullptr, nullptr) <= kBoundaryTol) return true;
        if (winding_about(loops_[0], p) == 0) return false;
        for (std::size_t h = 1; h < loops_.size(); ++h)
            if (winding_about(loops_[h], p) != 0) return false;
        return true;
    }

    double polygon_boundary_distance(Vec2 p, Vec2* nearest, std::size_t* loop, std::size_t* seg) const {
        double best = INFINITY;
        for (std::size_t l = 0; l < loops_.size(); ++l) {
            const Curve& c = loops_[l];
            for (std::size_t k = 0; k < c.segment_count(); ++k) {
                Vec2 q;
                const double d = point_segment_distance(p, c.segment_start(k), c.segment_end(k), &q);
                if (d < best) {
                    best = d;
                    if (nearest) *nearest = q;
                    if (loop) *loop = l;
                    if (seg) *seg = k;
                }
            }
        }
        return best;
    }

    static void checked(const Curve& c) {
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw SurfaceError(e.what());
        }
    }

    static bool loops_meet(const Curve& a, const Curve& b) {
        for (std::size_t i = 0; i < a.segment_count(); ++i)
            for (std::size_t j = 0; j < b.segment_count(); ++j)
                if (segments_intersect(a.segment_start(i), a.segment_end(i), b.segment_start(j), b.segment_end(j)))
                    return true;
        return false;
    }
};

}  // namespace vfindex
