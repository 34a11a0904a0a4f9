#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfindex/semiflow.hpp"
#include "vfindex/zeros.hpp"

namespace vfindex {

struct IndexConfig {
    double tau_initial = 0.1;
    double tau_min = 1e-4;
    double angle_step_max = kPi / 4;
    int contour_refinement_limit = 8;  // verification passes before giving up
    int max_bisection_depth = 30;
    int min_segments = 64;
    double min_modulus = 1e-10;
    FlowConfig flow{};

    void validate() const {
        if (!(tau_min > 0.0) || !(tau_min < tau_initial)) throw std::invalid_argument("need 0 < tau_min < tau_initial");
        if (!(angle_step_max > 0.0) || angle_step_max > kPi / 2) throw std::invalid_argument("need 0 < angle_step_max <= pi/2");
        if (contour_refinement_limit < 1) throw std::invalid_argument("contour_refinement_limit must be positive");
        flow.validate();
    }
};

struct IndexResult {
    int value = 0;
    std::vector<Curve> contours;  // refined sample polylines actually used
    double min_modulus = INFINITY;
    double tau = std::numeric_limits<double>::quiet_NaN();
    int refinement_count = 0;

    std::size_t contour_points() const {
        std::size_t n = 0;
        for (const auto& c : contours) n += c.vertices.size();
        return n;
    }
};

class IndexError : public std::runtime_error {
public:
    enum class Kind { vanishing_on_contour, refinement_limit, other_zero_inside, radius_dependence, tau_unstable, not_isolating };
    IndexError(Kind k, const std::string& msg, Vec2 at = {}) : std::runtime_error(msg), kind(k), where(at) {}
    Kind kind;
    Vec2 where;
};

using VectorMap = std::function<Vec2(Vec2)>;

namespace detail {

struct Sample {
    Vec2 p;
    Vec2 v;
};

class WindingEngine {
public:
    WindingEngine(const VectorMap& V, const IndexConfig& cfg) : V_(V), cfg_(cfg) {}

    double min_modulus = INFINITY;

    Sample eval(Vec2 p) {
        const Vec2 v = V_(p);
        const double m = norm(v);
        if (!std::isfinite(m)) throw IndexError(IndexError::Kind::vanishing_on_contour, "vector map not finite on contour", p);
        min_modulus = std::min(min_modulus, m);
        if (m <= cfg_.min_modulus) throw IndexError(IndexError::Kind::vanishing_on_contour, "vector map vanishes on contour", p);
        return {p, v};
    }

    // Subdivides until every angle increment is within angle_step_max.
    std::vector<Sample> adapt(const std::vector<Sample>& base) {
        std::vector<Sample> out;
        const std::size_t n = base.size();
        for (std::size_t k = 0; k < n; ++k) {
            out.push_back(base[k]);
            refine(base[k], base[(k + 1) % n], 0, out);
        }
        return out;
    }

    static double turns(const std::vector<Sample>& s) {
        double a = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) a += signed_angle(s[k].v, s[(k + 1) % s.size()].v);
        return a / kTwoPi;
    }

    std::vector<Sample> doubled(const std::vector<Sample>& s) {
        std::vector<Sample> out;
        out.reserve(2 * s.size());
        for (std::size_t k = 0; k < s.size(); ++k) {
            out.push_back(s[k]);
            out.push_back(eval(0.5 * (s[k].p + s[(k + 1) % s.size()].p)));
        }
        return out;
    }

private:
    const VectorMap& V_;
    const IndexConfig& cfg_;

    void refine(const Sample& a, const Sample& b, int depth, std::vector<Sample>& out) {
        if (std::abs(signed_angle(a.v, b.v)) <= cfg_.angle_step_max) return;
        if (depth >= cfg_.max_bisection_depth)
            throw IndexError(IndexError::Kind::refinement_limit, "angle subdivision depth exceeded", a.p);
        const Sample m = eval(0.5 * (a.p + b.p));
        refine(a, m, depth + 1, out);
        out.push_back(m);
        refine(m, b, depth + 1, out);
    }
};

inline bool near_integer(double w) { return std::abs(w - std::round(w)) < 0.01; }

}  // namespace detail

/// Winding number of V along a closed curve: adaptive angle summation with
/// one verification pass at doubled density.
inline IndexResult winding_number(const VectorMap& V, const Curve& gamma, const IndexConfig& cfg = {}) {
    if (!gamma.closed || gamma.vertices.size() < 2) throw std::invalid_argument("winding number needs a closed curve");
    detail::WindingEngine eng(V, cfg);
    const double L = gamma.length();
    std::vector<detail::Sample> base;
    for (std::size_t k = 0; k < gamma.segment_count(); ++k) {
        const Vec2 a = gamma.segment_start(k), b = gamma.segment_end(k);
        const int m = std::max(1, static_cast<int>(std::ceil(cfg.min_segments * distance(a, b) / L)));
        for (int i = 0; i < m; ++i) base.push_back(eng.eval(a + (static_cast<double>(i) / m) * (b - a)));
    }
    IndexResult res;
    std::vector<detail::Sample> cur = eng.adapt(base);
    for (int pass = 0;; ++pass) {
        const double w1 = detail::WindingEngine::turns(cur);
        std::vector<detail::Sample> fine = eng.doubled(cur);
        const double w2 = detail::WindingEngine::turns(fine);
        ++res.refinement_count;
        if (detail::near_integer(w1) && detail::near_integer(w2) && std::lround(w1) == std::lround(w2)) {
            res.value = static_cast<int>(std::lround(w1));
            break;
        }
        if (pass + 1 >= cfg.contour_refinement_limit)
            throw IndexError(IndexError::Kind::refinement_limit, "winding number did not stabilise under refinement");
        cur = eng.adapt(fine);
    }
    Curve used;
    for (const auto& s : cur) used.vertices.push_back(s.p);
    res.contours.push_back(std::move(used));
    res.min_modulus = eng.min_modulus;
    return res;
}

/// Sum over the contours of a region (holes run clockwise).
inline IndexResult winding_number(const VectorMap& V, const Region& U, const IndexConfig& cfg = {}) {
    IndexResult total;
    total.value = 0;
    for (const Curve& c : U.contours) {
        IndexResult r = winding_number(V, c, cfg);
        total.value += r.value;
        total.min_modulus = std::min(total.min_modulus, r.min_modulus);
        total.refinement_count = std::max(total.refinement_count, r.refinement_count);
        total.contours.push_back(std::move(r.contours.front()));
    }
    return total;
}

/// Poincare-Hopf index of X at an isolated zero p via the circle of radius r,
/// after checking that the closed disk holds no other zero and that the
/// circle of radius r/2 gives the same value.
template <PlanarField F>
IndexResult index_at_zero(const F& X, Vec2 p, double r, const IndexConfig& cfg = {}) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    const ZeroScan scan = scan_zeros(X, Box{p - Vec2{r, r}, p + Vec2{r, r}}, 64, 1, nullptr);
    const double tol = scan.grid.h;
    for (Vec2 z : scan.zeros)
        if (distance(z, p) <= r && distance(z, p) > tol)
            throw IndexError(IndexError::Kind::other_zero_inside, "another zero lies in the disk", z);
    for (Cell c : scan.suspect_cells) {
        const Vec2 q = scan.grid.center(c);
        if (distance(q, p) <= r && distance(q, p) > 3.0 * scan.grid.h)
            throw IndexError(IndexError::Kind::other_zero_inside, "non-isolated zero set in the disk", q);
    }
    const VectorMap V = [&](Vec2 q) { return Vec2(X(q)); };
    IndexResult outer = winding_number(V, Curve::circle(p, r, 64), cfg);
    const IndexResult inner = winding_number(V, Curve::circle(p, 0.5 * r, 64), cfg);
    if (inner.value != outer.value)
        throw IndexError(IndexError::Kind::radius_dependence, "index depends on the radius", p);
    return outer;
}

/// Fixed-point index of f on U as the winding of x - f(retract_S(x)) over
/// the contours of U.
inline IndexResult fixed_point_index(const VectorMap& f, const Surface& S, const Region& U, const IndexConfig& cfg = {}) {
    const VectorMap disp = [&](Vec2 x) { return x - f(S.retract(x)); };
    return winding_number(disp, U, cfg);
}

/// Zeros of X on the part of the contours that lies in S make U non-isolating.
template <PlanarField F>
void check_isolating(const F& X, const Surface& S, const Region& U, double threshold = 1e-10) {
    for (const Curve& c : U.contours) {
        for (std::size_t k = 0; k < c.segment_count(); ++k) {
            const Vec2 a = c.segment_start(k), b = c.segment_end(k);
            for (int i = 0; i < 4; ++i) {
                const Vec2 q = a + (i / 4.0) * (b - a);
                if (S.contains(q) && norm(Vec2(X(q))) <= threshold)
                    throw IndexError(IndexError::Kind::not_isolating, "zero of the field on the region boundary", q);
            }
        }
    }
}

/// Index of X in U: fixed-point index of the time-tau map, tau halved from
/// tau_initial until the values at tau and tau/2 agree.
template <PlanarField F>
IndexResult vector_field_index(const F& X, const Surface& S, const Region& U, const IndexConfig& cfg = {}) {
    cfg.validate();
    check_isolating(X, S, U);
    FlowConfig fc = cfg.flow;
    fc.record = false;
    auto at_tau = [&](double tau) -> std::optional<IndexResult> {
        const VectorMap phi = [&, tau](Vec2 q) { return flow_to(X, S, q, tau, fc); };
        try {
            IndexResult r = fixed_point_index(phi, S, U, cfg);
            r.tau = tau;
            return r;
        } catch (const IndexError& e) {
            if (e.kind == IndexError::Kind::vanishing_on_contour) return std::nullopt;
            throw;
        }
    };
    double tau = cfg.tau_initial;
    std::optional<IndexResult> cur = at_tau(tau);
    while (tau / 2 >= cfg.tau_min) {
        std::optional<IndexResult> half = at_tau(tau / 2);
        if (cur && half && cur->value == half->value) return *cur;
        tau /= 2;
        cur = std::move(half);
    }
    throw IndexError(IndexError::Kind::tau_unstable, "tau_min reached without a stable index");
}

template <PlanarField F>
bool is_essential(const F& X, const Surface& S, const Region& U, const IndexConfig& cfg = {}) {
    return vector_field_index(X, S, U, cfg).value != 0;
}

enum class HomotopyVerdict { identical_direction, antipodal, straightline_nonsingular, inconclusive };

inline const char* to_string(HomotopyVerdict v) {
    switch (v) {
        case HomotopyVerdict::identical_direction: return "identical_direction";
        case HomotopyVerdict::antipodal: return "antipodal";
        case HomotopyVerdict::straightline_nonsingular: return "straightline_nonsingular";
        case HomotopyVerdict::inconclusive: return "inconclusive";
    }
    return "";
}

/// Classifies how X and Y restricted to C are nonsingularly homotopic.
template <PlanarField F, PlanarField G>
HomotopyVerdict nonsingular_homotopy_check(const F& X, const G& Y, const Curve& C, int min_samples = 256) {
    std::vector<Vec2> pts;
    const double L = C.length();
    for (std::size_t k = 0; k < C.segment_count(); ++k) {
        const Vec2 a = C.segment_start(k), b = C.segment_end(k);
        const int m = std::max(1, static_cast<int>(std::ceil(min_samples * distance(a, b) / L)));
        for (int i = 0; i < m; ++i) pts.push_back(a + (static_cast<double>(i) / m) * (b - a));
    }
    std::vector<Vec2> xs, ys;
    double max_gap = 0.0, max_anti = 0.0;
    for (Vec2 p : pts) {
        const Vec2 x = X(p), y = Y(p);
        if (norm(x) <= 1e-10 || norm(y) <= 1e-10)
            throw IndexError(IndexError::Kind::vanishing_on_contour, "field vanishes on the curve", p);
        const double ang = std::abs(signed_angle(x, y));
        max_gap = std::max(max_gap, ang);
        max_anti = std::max(max_anti, kPi - ang);
        xs.push_back(x);
        ys.push_back(y);
    }
    if (max_gap < 1e-6) return HomotopyVerdict::identical_direction;
    if (max_anti < 1e-6) return HomotopyVerdict::antipodal;
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (norm((1.0 - t) * xs[k] + t * ys[k]) <= 1e-8) return HomotopyVerdict::inconclusive;
    }
    return HomotopyVerdict::straightline_nonsingular;
}

}  // namespace vfindex
